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

#include "flnoise/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "flnoise/errors.hpp"

namespace flnoise {
namespace {

// Gaussian elimination with partial pivoting on a dense n x n system.
std::vector<double> solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  const double tiny = scale * 1e-13;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (!(std::abs(a[pivot * n + col]) > tiny)) throw DomainError("regression: singular design");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return x;
}

}  // namespace

RegressionFit fit_linear(std::vector<std::vector<double>> design, std::vector<double> responses) {
  const std::size_t m = responses.size();
  if (design.size() != m) throw DomainError("regression: design and response counts differ");
  if (m == 0) throw DomainError("regression: no points");
  const std::size_t dim = design.front().size();
  for (const auto& row : design) {
    if (row.size() != dim) throw DomainError("regression: ragged design");
  }
  if (m < dim + 2) {
    throw DomainError("regression: " + std::to_string(m) + " points for " + std::to_string(dim) +
                      " predictors (need at least " + std::to_string(dim + 2) + ")");
  }

  std::vector<double> xbar(dim, 0.0);
  double ybar = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < dim; ++j) xbar[j] += design[i][j];
    ybar += responses[i];
  }
  for (double& v : xbar) v /= static_cast<double>(m);
  ybar /= static_cast<double>(m);

  std::vector<double> slopes;
  if (dim > 0) {
    std::vector<double> xtx(dim * dim, 0.0);
    std::vector<double> xty(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double dy = responses[i] - ybar;
      for (std::size_t j = 0; j < dim; ++j) {
        const double dj = design[i][j] - xbar[j];
        xty[j] += dj * dy;
        for (std::size_t l = 0; l < dim; ++l) xtx[j * dim + l] += dj * (design[i][l] - xbar[l]);
      }
    }
    slopes = solve(std::move(xtx), std::move(xty));
  }

  RegressionFit fit;
  double intercept = ybar;
  for (std::size_t j = 0; j < dim; ++j) intercept -= slopes[j] * xbar[j];
  fit.coefficients.push_back(intercept);
  fit.coefficients.insert(fit.coefficients.end(), slopes.begin(), slopes.end());

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double pred = intercept;
    for (std::size_t j = 0; j < dim; ++j) pred += slopes[j] * design[i][j];
    ss_res += (responses[i] - pred) * (responses[i] - pred);
    ss_tot += (responses[i] - ybar) * (responses[i] - ybar);
  }
  fit.r_squared = ss_tot == 0.0 ? 0.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  fit.design = std::move(design);
  fit.responses = std::move(responses);
  return fit;
}

RegressionFit fit_accuracy_vs_noise(std::span<const AccuracyPoint> points) {
  std::vector<std::vector<double>> design;
  std::vector<double> responses;
  for (const auto& p : points) {
    design.push_back(p.noise);
    responses.push_back(p.accuracy);
  }
  return fit_linear(std::move(design), std::move(responses));
}

GrowthFit fit_pathnorm_growth(std::span<const GrowthPoint> series) {
  if (series.size() < 3) throw DomainError("regression: growth fit needs at least 3 points");
  std::vector<std::vector<double>> design;
  std::vector<double> responses;
  for (const auto& p : series) {
    if (!(p.round >= 1.0)) throw DomainError("regression: growth fit needs t >= 1");
    if (!(p.path_norm > 0.0)) throw DomainError("regression: growth fit needs positive path-norm");
    design.push_back({std::log(p.round)});
    responses.push_back(std::log(p.path_norm));
  }
  const RegressionFit fit = fit_linear(std::move(design), std::move(responses));
  return {fit.coefficients[1], fit.coefficients[0], fit.r_squared};
}

}  // namespace flnoise
