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
#include <vector>

namespace flnoise {

/// Ordinary least squares with an intercept.
struct RegressionFit {
  std::vector<std::vector<double>> design;  // one predictor tuple per point
  std::vector<double> responses;
  std::vector<double> coefficients;  // intercept first, then one slope per predictor
  double r_squared = 0.0;
  std::size_t point_count() const { return responses.size(); }
};

/// Fits y = b0 + sum_j b_j x_j. R^2 = 1 - SS_res / SS_tot, reported as 0 when
/// SS_tot is 0. Throws DomainError when there are fewer than dim + 2 points,
/// the rows are ragged, or the centered design is singular.
RegressionFit fit_linear(std::vector<std::vector<double>> design, std::vector<double> responses);

struct AccuracyPoint {
  std::vector<double> noise;  // wp_k per client
  double accuracy = 0.0;
};

RegressionFit fit_accuracy_vs_noise(std::span<const AccuracyPoint> points);

struct GrowthPoint {
  double round = 0.0;
  double path_norm = 0.0;
};

struct GrowthFit {
  double exponent = 0.0;  // a in log pnp = a log t + b
  double offset = 0.0;    // b
  double r_squared = 0.0;
};

/// Log-log least squares; needs at least 3 points with t >= 1 and pnp > 0.
GrowthFit fit_pathnorm_growth(std::span<const GrowthPoint> series);

}  // namespace flnoise
