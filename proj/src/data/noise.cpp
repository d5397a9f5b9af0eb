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

#include "flnoise/noise.hpp"

#include <cmath>
#include <numeric>

#include "flnoise/errors.hpp"
#include "flnoise/rng.hpp"

namespace flnoise {

std::size_t flip_count(double rate, std::size_t n) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw DomainError("noise: rate must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
}

LabeledDataset inject_label_noise(const LabeledDataset& dataset, double rate, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  const std::size_t flips = flip_count(rate, n);
  const std::size_t classes = dataset.class_count();
  if (rate > 0.0 && classes < 2) throw DomainError("noise: label flipping needs at least two classes");

  std::vector<Label> labels(dataset.labels().begin(), dataset.labels().end());
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < flips; ++i) {
    // partial Fisher-Yates: pool[i..n) holds the indices not chosen yet
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
    const std::size_t victim = pool[i];
    const auto original = static_cast<std::size_t>(labels[victim]);
    std::size_t target = rng.below(classes - 1);
    if (target >= original) ++target;
    labels[victim] = static_cast<Label>(target);
  }
  return dataset.relabeled(std::move(labels), Noised{rate});
}

std::vector<LabeledDataset> inject_label_noise(const std::vector<LabeledDataset>& shards, const NoiseSpec& spec) {
  if (spec.rates.size() != shards.size()) throw ShapeError("noise: one rate per client shard required");
  std::vector<LabeledDataset> out;
  out.reserve(shards.size());
  for (std::size_t k = 0; k < shards.size(); ++k) {
    out.push_back(inject_label_noise(shards[k], spec.rates[k], derive_seed(spec.seed, {k})));
  }
  return out;
}

}  // namespace flnoise
