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
#include <string>
#include <vector>

#include "flnoise/manifest.hpp"

namespace flnoise {

struct VerifyReport {
  std::size_t cells_checked = 0;
  std::size_t rows_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Re-checks a finished sweep: every complete cell has its metrics file with
/// one row per round, G == |L_dagger - L|, accuracies in [0, 1], nonnegative
/// path-norms, bound_holds true wherever the bound is asserted (the output
/// bound and path-norm variants), the saved spec hashes to the manifest's
/// value, and the summary matches the last row of each cell.
VerifyReport verify_manifest(const RunManifest& manifest);

}  // namespace flnoise
