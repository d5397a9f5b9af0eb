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

/// Example indices per shard. Shards are contiguous runs of a seeded
/// permutation; the first n % N shards get one extra example.
std::vector<std::vector<std::size_t>> partition_indices(std::size_t example_count, std::size_t client_count,
                                                        std::uint64_t seed);

/// Equal-size IID split of `dataset` across `client_count` clients.
std::vector<LabeledDataset> partition_iid(const LabeledDataset& dataset, std::size_t client_count,
                                          std::uint64_t seed);

}  // namespace flnoise
