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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "flnoise/manifest.hpp"

namespace flnoise {

/// Figure selectors: fig3a (path-norm per round and strategy), fig3b (per
/// depth with log columns), fig4 (final accuracy over the noise grid), fig5
/// (fig4 plus the fitted plane), fig6 (mean client loss per round), fig7
/// (accuracy per round), fig8 (final accuracy per strategy and noise level).
std::vector<std::string> figure_ids();

/// Writes the plot table for `figure` as CSV. Throws DomainError for an
/// unknown selector or an empty manifest, and ParseError listing every cell
/// that is not complete or whose metrics file is missing.
void emit_figure_data(const RunManifest& manifest, std::string_view figure, std::ostream& out);

}  // namespace flnoise
