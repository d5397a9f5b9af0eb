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
#include <span>

#include "flnoise/labeled_dataset.hpp"
#include "flnoise/relu_mlp.hpp"

namespace flnoise {

struct SgdConfig {
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::size_t epochs = 5;
  std::uint64_t seed = 0;
};

void validate(const SgdConfig& config);

struct Gradient {
  Vector values;  // same layout as ReluMlp::parameters()
  double mean_loss = 0.0;
};

/// Mean cross-entropy gradient over the examples at `indices`. The ReLU
/// derivative at exactly 0 is taken as 0; frozen bias rows get no gradient.
Gradient backward(const ReluMlp& model, const LabeledDataset& data, std::span<const std::size_t> indices);

/// Gradient over the whole dataset.
Gradient backward(const ReluMlp& model, const LabeledDataset& data);

/// Logits for every example, row-major (n x classes). Same numbers as
/// forward_features up to summation order.
Vector forward_dataset(const ReluMlp& model, const LabeledDataset& data);

/// Mini-batch steps per epoch: ceil(n / batch_size).
std::size_t steps_per_epoch(std::size_t examples, std::size_t batch_size);

struct SgdResult {
  ReluMlp model;
  std::size_t steps = 0;
  /// Example-weighted mean of the mini-batch losses over all epochs.
  double mean_loss = 0.0;
};

/// `epochs` passes of mini-batch SGD. Epoch e visits the examples in an order
/// shuffled by derive_seed(config.seed, {e}); the last batch of an epoch may be
/// short. Each step is w <- w - lr * (grad + correction), where `correction`
/// (empty for none) is a constant vector in parameter layout.
SgdResult sgd_epochs(ReluMlp model, const LabeledDataset& data, const SgdConfig& config,
                     std::span<const double> correction = {});

}  // namespace flnoise
