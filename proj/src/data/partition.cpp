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

#include "flnoise/partition.hpp"

#include <numeric>
#include <string>

#include "flnoise/errors.hpp"
#include "flnoise/rng.hpp"

namespace flnoise {

std::vector<std::vector<std::size_t>> partition_indices(std::size_t example_count, std::size_t client_count,
                                                        std::uint64_t seed) {
  if (client_count == 0) throw DomainError("partition: client count must be positive");
  if (client_count > example_count) {
    throw DomainError("partition: " + std::to_string(client_count) + " clients for " +
                      std::to_string(example_count) + " examples");
  }
  std::vector<std::size_t> order(example_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  const std::size_t base = example_count / client_count;
  const std::size_t extra = example_count % client_count;
  std::vector<std::vector<std::size_t>> shards(client_count);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < client_count; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    shards[k].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                     order.begin() + static_cast<std::ptrdiff_t>(cursor + len));
    cursor += len;
  }
  return shards;
}

std::vector<LabeledDataset> partition_iid(const LabeledDataset& dataset, std::size_t client_count,
                                          std::uint64_t seed) {
  std::vector<LabeledDataset> out;
  for (const auto& shard : partition_indices(dataset.size(), client_count, seed)) {
    out.push_back(dataset.subset(shard));
  }
  return out;
}

}  // namespace flnoise
