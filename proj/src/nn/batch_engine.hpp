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

#include <span>
#include <vector>

#include "flnoise/labeled_dataset.hpp"
#include "flnoise/relu_mlp.hpp"

namespace flnoise::detail {

/// Reusable buffers for mini-batch forward/backward passes. Activations are
/// kept batch-major (one row per example) so every inner loop is a
/// contiguous axpy.
class BatchEngine {
 public:
  BatchEngine(const ReluMlp& model, std::size_t max_batch);

  /// Writes the mean gradient over the batch into `gradient` and returns the
  /// mean loss.
  double gradient(const ReluMlp& model, const LabeledDataset& data, std::span<const std::size_t> indices,
                  std::span<double> gradient);

  /// Appends the logits of the examples at `indices` (batch-major) to `out`.
  void logits(const ReluMlp& model, const LabeledDataset& data, std::span<const std::size_t> indices, Vector& out);

 private:
  void load_inputs(const LabeledDataset& data, std::span<const std::size_t> indices);
  void propagate(const ReluMlp& model, std::size_t batch);

  std::vector<std::size_t> dims_;
  std::vector<Vector> acts_;       // acts_[l] is batch x d_l
  std::vector<Vector> transposed_;  // W_l^T, d_l x d_{l+1}
  Vector delta_;
  Vector delta_prev_;
  Vector grad_t_;
};

}  // namespace flnoise::detail
