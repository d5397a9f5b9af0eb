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

#include "flnoise/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flnoise/errors.hpp"
#include "flnoise/training.hpp"

namespace flnoise {
namespace {

constexpr double kWeightTolerance = 1e-12;

void check_weights(std::span<const double> weights, std::size_t clients) {
  if (weights.size() != clients) {
    throw DomainError("risk: " + std::to_string(weights.size()) + " weights for " + std::to_string(clients) +
                      " clients");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("risk: negative client weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) throw DomainError("risk: client weights do not sum to 1");
}

void check_classes(const ReluMlp& model, std::size_t classes) {
  if (model.output_dim() != classes) throw ShapeError("risk: model output width differs from class count");
}

}  // namespace

std::vector<double> client_weights(std::span<const std::size_t> shard_sizes) {
  const double n = static_cast<double>(std::accumulate(shard_sizes.begin(), shard_sizes.end(), std::size_t{0}));
  if (n == 0) throw DomainError("risk: no examples across clients");
  std::vector<double> out;
  for (std::size_t s : shard_sizes) out.push_back(static_cast<double>(s) / n);
  return out;
}

std::vector<double> client_weights(std::span<const LabeledDataset> shards) {
  std::vector<std::size_t> sizes;
  for (const auto& s : shards) sizes.push_back(s.size());
  return client_weights(sizes);
}

double expected_loss(const ReluMlp& model, const DiscreteLaw& law) {
  check_classes(model, law.classes);
  double total = 0.0;
  for (std::size_t p = 0; p < law.point_count(); ++p) {
    if (law.marginal[p] == 0.0) continue;
    const Vector logits = forward_features(model, law.point(p));
    double inner = 0.0;
    for (std::size_t i = 0; i < law.classes; ++i) {
      const double q = law.probability(p, i);
      if (q != 0.0) inner += q * cross_entropy_loss(logits, i, law.classes);
    }
    total += law.marginal[p] * inner;
  }
  return total;
}

double mean_loss(const ReluMlp& model, const LabeledDataset& data) {
  check_classes(model, data.class_count());
  const std::size_t c = data.class_count();
  const Vector logits = forward_dataset(model, data);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += cross_entropy_loss(std::span<const double>(logits).subspan(i * c, c), data.label(i), c);
  }
  return total / static_cast<double>(data.size());
}

double empirical_risk(const ReluMlp& model, const GridWorld& world, std::span<const double> weights) {
  check_weights(weights, world.client_count());
  double risk = 0.0;
  for (std::size_t k = 0; k < world.client_count(); ++k) risk += weights[k] * expected_loss(model, world.client_law(k));
  return risk;
}

double empirical_risk(const ReluMlp& model, std::span<const LabeledDataset> shards, std::span<const double> weights) {
  check_weights(weights, shards.size());
  double risk = 0.0;
  for (std::size_t k = 0; k < shards.size(); ++k) risk += weights[k] * mean_loss(model, shards[k]);
  return risk;
}

double ground_truth_risk(const ReluMlp& model, const GridWorld& world, std::span<const double> weights) {
  check_weights(weights, world.client_count());
  double risk = 0.0;
  for (std::size_t k = 0; k < world.client_count(); ++k) risk += weights[k] * expected_loss(model, world.truth_law(k));
  return risk;
}

double generalization_error(const ReluMlp& model, const GridWorld& world, std::span<const double> weights) {
  return std::abs(ground_truth_risk(model, world, weights) - empirical_risk(model, world, weights));
}

double accuracy(const ReluMlp& model, const LabeledDataset& data) {
  check_classes(model, data.class_count());
  const std::size_t c = data.class_count();
  const Vector logits = forward_dataset(model, data);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (argmax(std::span<const double>(logits).subspan(i * c, c)) == data.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

double expected_accuracy(const ReluMlp& model, const GridWorld& world) {
  check_classes(model, world.class_count());
  const DiscreteLaw law = world.truth_law(0);
  double acc = 0.0;
  for (std::size_t p = 0; p < law.point_count(); ++p) {
    const std::size_t guess = argmax(forward_features(model, law.point(p)));
    acc += law.marginal[p] * law.probability(p, guess);
  }
  // Summing the marginal can overshoot 1 by an ulp.
  return std::min(acc, 1.0);
}

}  // namespace flnoise
