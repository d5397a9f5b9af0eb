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
#include <cstdint>
#include <vector>

#include "flnoise/labeled_dataset.hpp"

namespace flnoise {

/// Per-client noise levels wp_k, each in [0, 1].
struct NoiseSpec {
  std::vector<double> rates;
  std::uint64_t seed = 0;
};

/// Number of labels flipped at rate `rate` on `n` examples: round(rate * n).
std::size_t flip_count(double rate, std::size_t n);

/// Flips exactly flip_count(rate, n) labels, chosen uniformly without
/// replacement, each to a uniform draw from the other C - 1 classes.
///
/// Indices are drawn one at a time and each is given its target immediately,
/// so for a fixed seed the flips at a lower rate are a prefix of the flips at
/// a higher rate.
LabeledDataset inject_label_noise(const LabeledDataset& dataset, double rate, std::uint64_t seed);

/// Applies NoiseSpec rates to client shards; client k draws from
/// derive_seed(spec.seed, {k}).
std::vector<LabeledDataset> inject_label_noise(const std::vector<LabeledDataset>& shards, const NoiseSpec& spec);

}  // namespace flnoise
