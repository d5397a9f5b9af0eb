/**
 * Copyright 2026 The flnoise Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "flnoise/bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flnoise/errors.hpp"
#include "flnoise/risk.hpp"
#include "flnoise/training.hpp"

namespace flnoise {
namespace {

void check_weight_count(std::span<const double> weights, std::size_t clients) {
  if (weights.size() != clients) {
    throw DomainError("bound: " + std::to_string(weights.size()) + " weights for " + std::to_string(clients) +
                      " clients");
  }
}

double client_term(const GridWorld& world, std::size_t k) {
  double term = 0.0;
  for (std::size_t p = 0; p < world.point_count(); ++p) {
    const double m = world.marginal(k, p);
    if (m == 0.0) continue;
    double gap = 0.0;
    for (std::size_t i = 0; i < world.class_count(); ++i) {
      gap += std::abs(world.truth_probability(p, i) - world.client_probability(k, p, i));
    }
    term += m * gap;
  }
  return term;
}

}  // namespace

BoundReport make_bound_report(double term, double omega, double observed_error, OmegaVariant variant,
                              bool shared_marginal) {
  BoundReport r;
  r.expectation_term = term;
  r.omega = omega;
  r.bound = omega * term;
  r.observed_error = observed_error;
  r.holds = observed_error <= r.bound + kBoundSlack;
  r.variant = variant;
  r.shared_marginal = shared_marginal;
  return r;
}

std::string_view to_string(OmegaVariant variant) {
  switch (variant) {
    case OmegaVariant::output_bound:
      return "output_bound";
    case OmegaVariant::path_norm:
      return "path_norm";
    case OmegaVariant::polynomial:
      return "polynomial";
  }
  throw DomainError("bound: invalid omega variant");
}

OmegaVariant parse_omega_variant(std::string_view name) {
  if (name == "output_bound") return OmegaVariant::output_bound;
  if (name == "path_norm") return OmegaVariant::path_norm;
  if (name == "polynomial") return OmegaVariant::polynomial;
  throw DomainError("bound: unknown omega variant '" + std::string(name) + "'");
}

double noise_expectation_term(const GridWorld& world, std::span<const double> weights) {
  check_weight_count(weights, world.client_count());
  if (!world.has_shared_marginal()) {
    throw AssumptionViolation("bound: client feature marginals differ");
  }
  double term = 0.0;
  for (std::size_t k = 0; k < world.client_count(); ++k) term += weights[k] * client_term(world, k);
  return term;
}

double max_abs_logit(const ReluMlp& model, const DiscreteLaw& law) {
  double best = 0.0;
  for (std::size_t p = 0; p < law.point_count(); ++p) {
    for (double v : forward_features(model, law.point(p))) best = std::max(best, std::abs(v));
  }
  return best;
}

double max_abs_logit(const ReluMlp& model, const LabeledDataset& data) {
  double best = 0.0;
  for (double v : forward_dataset(model, data)) best = std::max(best, std::abs(v));
  return best;
}

double omega_value(const ReluMlp& model, double output_bound, const OmegaSpec& spec) {
  switch (spec.variant) {
    case OmegaVariant::output_bound:
      return output_bound;
    case OmegaVariant::path_norm:
      return path_norm_proxy(model);
    case OmegaVariant::polynomial: {
      const double exponent = static_cast<double>(spec.local_epochs * model.hidden_layer_count());
      return spec.c0 * std::pow(static_cast<double>(spec.round), exponent);
    }
  }
  throw DomainError("bound: invalid omega variant");
}

BoundReport theorem1_bound(const ReluMlp& model, const GridWorld& world, std::span<const double> weights,
                           const OmegaSpec& spec) {
  check_weight_count(weights, world.client_count());
  double term = 0.0;
  for (std::size_t k = 0; k < world.client_count(); ++k) term += weights[k] * client_term(world, k);

  double cf = 0.0;
  if (spec.variant == OmegaVariant::output_bound) {
    for (std::size_t p = 0; p < world.point_count(); ++p) {
      for (double v : forward_features(model, world.point(p))) cf = std::max(cf, std::abs(v));
    }
  }
  const double observed = generalization_error(model, world, weights);
  return make_bound_report(term, omega_value(model, cf, spec), observed, spec.variant, world.has_shared_marginal());
}

BoundReport theorem1_bound(const ReluMlp& model, std::span<const LabeledDataset> noisy,
                           std::span<const LabeledDataset> clean, std::span<const double> weights,
                           const OmegaSpec& spec) {
  if (noisy.size() != clean.size()) throw ShapeError("bound: noisy and clean shard counts differ");
  check_weight_count(weights, noisy.size());
  double term = 0.0;
  double cf = 0.0;
  for (std::size_t k = 0; k < noisy.size(); ++k) {
    const LabeledDataset& a = noisy[k];
    const LabeledDataset& b = clean[k];
    if (a.size() != b.size() || !std::ranges::equal(a.features(), b.features())) {
      throw ShapeError("bound: noisy shard " + std::to_string(k) + " does not match its clean shard");
    }
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < a.size(); ++i) flipped += a.label(i) != b.label(i) ? 1 : 0;
    term += weights[k] * 2.0 * static_cast<double>(flipped) / static_cast<double>(a.size());
    if (spec.variant == OmegaVariant::output_bound) cf = std::max(cf, max_abs_logit(model, a));
  }
  const double observed = std::abs(empirical_risk(model, clean, weights) - empirical_risk(model, noisy, weights));
  return make_bound_report(term, omega_value(model, cf, spec), observed, spec.variant);
}

IdentityCheck lemma1_identity_check(const ReluMlp& model, const DiscreteLaw& law) {
  if (model.output_dim() != law.classes) throw ShapeError("bound: model output width differs from class count");
  const std::size_t c = law.classes;
  std::vector<Vector> logits(law.point_count());
  std::vector<double> lse(law.point_count());
  for (std::size_t p = 0; p < law.point_count(); ++p) {
    logits[p] = forward_features(model, law.point(p));
    lse[p] = log_sum_exp(logits[p]);
  }

  IdentityCheck out;
  for (std::size_t p = 0; p < law.point_count(); ++p) {
    if (law.marginal[p] == 0.0) continue;
    for (std::size_t i = 0; i < c; ++i) {
      const double q = law.probability(p, i);
      if (q != 0.0) out.direct += law.marginal[p] * q * cross_entropy_loss(logits[p], i, c);
    }
  }

  for (std::size_t i = 0; i < c; ++i) {
    double class_mass = 0.0;
    for (std::size_t p = 0; p < law.point_count(); ++p) class_mass += law.marginal[p] * law.probability(p, i);
    if (class_mass == 0.0) continue;
    double conditional = 0.0;
    for (std::size_t p = 0; p < law.point_count(); ++p) {
      const double joint = law.marginal[p] * law.probability(p, i);
      if (joint != 0.0) conditional += joint / class_mass * (logits[p][i] - lse[p]);
    }
    out.expanded -= class_mass * conditional;
  }
  out.difference = std::abs(out.direct - out.expanded);
  return out;
}

}  // namespace flnoise
