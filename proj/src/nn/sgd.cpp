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

#include <cmath>
#include <numeric>

#include "batch_engine.hpp"
#include "flnoise/errors.hpp"
#include "flnoise/training.hpp"

namespace flnoise {

void validate(const SgdConfig& config) {
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw DomainError("sgd: learning rate must be finite and nonnegative");
  }
  if (config.batch_size == 0) throw DomainError("sgd: batch size must be positive");
  if (config.epochs == 0) throw DomainError("sgd: at least one epoch required");
}

std::size_t steps_per_epoch(std::size_t examples, std::size_t batch_size) {
  if (batch_size == 0) throw DomainError("sgd: batch size must be positive");
  return (examples + batch_size - 1) / batch_size;
}

SgdResult sgd_epochs(ReluMlp model, const LabeledDataset& data, const SgdConfig& config,
                     std::span<const double> correction) {
  validate(config);
  if (!correction.empty() && correction.size() != model.parameter_count()) {
    throw ShapeError("sgd: correction vector does not match parameter count");
  }
  const std::size_t n = data.size();
  const std::size_t batch = std::min(config.batch_size, n);
  detail::BatchEngine engine(model, batch);
  Vector grad(model.parameter_count(), 0.0);
  Vector masked_correction(correction.begin(), correction.end());
  if (!masked_correction.empty()) model.mask_frozen(masked_correction);

  std::vector<std::size_t> order(n);
  double loss_sum = 0.0;
  std::size_t steps = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, {epoch}));
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      std::span<const std::size_t> indices(order.data() + start, len);
      loss_sum += engine.gradient(model, data, indices, grad) * static_cast<double>(len);

      auto w = model.parameters();
      bool finite = true;
      if (masked_correction.empty()) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          w[i] = w[i] - config.learning_rate * grad[i];
          finite &= std::isfinite(w[i]);
        }
      } else {
        for (std::size_t i = 0; i < w.size(); ++i) {
          w[i] = w[i] - config.learning_rate * (grad[i] + masked_correction[i]);
          finite &= std::isfinite(w[i]);
        }
      }
      if (!finite) throw DomainError("sgd: weights became non-finite");
      ++steps;
    }
  }
  const double mean_loss = loss_sum / (static_cast<double>(n) * static_cast<double>(config.epochs));
  return SgdResult{std::move(model), steps, mean_loss};
}

}  // namespace flnoise
