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
#include <iosfwd>
#include <optional>
#include <vector>

#include "flnoise/experiment_spec.hpp"
#include "flnoise/grid_world.hpp"
#include "flnoise/labeled_dataset.hpp"
#include "flnoise/manifest.hpp"

namespace flnoise {

/// Gaussian blobs in [0, 1]^dim, `classes` balanced classes. Class centers
/// depend on `seed` only, so train and test sets drawn with different
/// `stream` values share them.
LabeledDataset make_blobs(std::size_t dim, std::size_t classes, std::size_t n, double spread, std::uint64_t seed,
                          std::uint64_t stream);

/// Clean training shards and the held-out test set of a sweep.
struct SweepData {
  std::vector<LabeledDataset> clean_shards;  // empty for grid worlds
  std::optional<LabeledDataset> test;        // empty for grid worlds
};

/// Loads or generates the data named by `spec`. Throws ParseError when a
/// dataset file is unreadable and ConfigError when it does not fit the
/// architectures.
SweepData prepare_data(const ExperimentSpec& spec);

/// Grid world used by a cell: client k swaps round(wp_k * side^2) labels.
GridWorld cell_world(const ExperimentSpec& spec, const std::vector<double>& noise);

struct SweepOptions {
  std::size_t threads = 1;     // cells trained concurrently
  std::ostream* log = nullptr;  // progress lines, when set
};

/// Runs every cell that has no complete, existing metrics file in the output
/// directory and writes `manifest.txt`, per-cell CSVs, `summary.csv` and
/// `regression.json`. A rerun with the same spec is byte-identical. Throws
/// ConfigError when the output directory holds a different experiment.
RunManifest run_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

}  // namespace flnoise
