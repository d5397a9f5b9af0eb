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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "flnoise/grid_world.hpp"
#include "flnoise/labeled_dataset.hpp"
#include "flnoise/relu_mlp.hpp"

namespace flnoise {

/// Choice of the output bound Omega multiplying the noise term.
enum class OmegaVariant {
  output_bound,  // C_f: largest |logit| over the evaluation points
  path_norm,     // path-norm proxy of the current model
  polynomial,    // C_0 * t^(E * L)
};

std::string_view to_string(OmegaVariant variant);
OmegaVariant parse_omega_variant(std::string_view name);

struct OmegaSpec {
  OmegaVariant variant = OmegaVariant::output_bound;
  double c0 = 1.0;                // polynomial variant only
  std::size_t round = 1;          // t, polynomial variant only
  std::size_t local_epochs = 1;   // E, polynomial variant only
};

struct BoundReport {
  double expectation_term = 0.0;
  double omega = 0.0;
  double bound = 0.0;
  double observed_error = 0.0;
  bool holds = false;  // observed_error <= bound + 1e-9
  OmegaVariant variant = OmegaVariant::output_bound;
  /// False when the clients' feature marginals differ; the report is still
  /// computed, each client's term taken under its own marginal.
  bool shared_marginal = true;
};

inline constexpr double kBoundSlack = 1e-9;

/// E_X[ sum_i sum_k w_k |Pr_mu(Y=i|X) - Pr_pi_k(Y=i|X)| ] by enumeration.
/// Throws AssumptionViolation if the client marginals are not identical.
double noise_expectation_term(const GridWorld& world, std::span<const double> weights);

/// max over points and classes of |f_i(x)|.
double max_abs_logit(const ReluMlp& model, const DiscreteLaw& law);
double max_abs_logit(const ReluMlp& model, const LabeledDataset& data);

/// Assembles a report from precomputed parts; bound = omega * term.
BoundReport make_bound_report(double term, double omega, double observed_error, OmegaVariant variant,
                              bool shared_marginal = true);

double omega_value(const ReluMlp& model, double output_bound, const OmegaSpec& spec);

/// Bound report on a grid world, with G = |L_dagger - L| computed exactly.
/// C_f is measured over every grid point.
BoundReport theorem1_bound(const ReluMlp& model, const GridWorld& world, std::span<const double> weights,
                           const OmegaSpec& spec);

/// Bound report on finite client datasets. Each client's law is the empirical
/// measure of its shard: the noisy labels play pi_k, the original labels mu,
/// so the term is sum_k w_k * 2 * (flipped_k / n_k). C_f is measured over the
/// training features.
BoundReport theorem1_bound(const ReluMlp& model, std::span<const LabeledDataset> noisy,
                           std::span<const LabeledDataset> clean, std::span<const double> weights,
                           const OmegaSpec& spec);

struct IdentityCheck {
  double direct = 0.0;
  double expanded = 0.0;
  double difference = 0.0;
};

/// Expected cross-entropy computed directly and through the class-conditional
/// expansion -sum_i Pr(Y=i) E[f_i(X) - log sum_r exp f_r(X) | Y=i]. Classes
/// with zero probability are skipped.
IdentityCheck lemma1_identity_check(const ReluMlp& model, const DiscreteLaw& law);

}  // namespace flnoise
