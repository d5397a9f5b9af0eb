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
#include <vector>

#include "flnoise/rng.hpp"

namespace flnoise {

using Vector = std::vector<double>;

/// Row-major view over one weight matrix.
template <class T>
struct BasicMatrixView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<T> data;

  T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<T> row(std::size_t r) const { return data.subspan(r * cols, cols); }
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

/// Dense ReLU network f(x; theta) with layer widths d_0 .. d_{L+1}.
///
/// d_0 counts the constant 1 appended to every input, so matrix 0's last
/// column is the first layer's bias. Matrix l has shape d_{l+1} x d_l. Hidden
/// layers apply max(0, .), the output layer is linear.
///
/// With hidden bias units enabled, the last unit of every hidden layer is a
/// constant 1: its incoming row is frozen to select the previous layer's last
/// unit (the input's constant 1 for the first hidden layer), so ReLU keeps it
/// at 1 and its outgoing column acts as the next layer's bias. The network is
/// still an ordinary ReLU network, so bias edges enter the path-norm proxy.
///
/// All parameters sit in one contiguous buffer, layer after layer.
class ReluMlp {
 public:
  /// Zero network (frozen bias rows set when `hidden_bias_units`).
  explicit ReluMlp(std::vector<std::size_t> layer_dims, bool hidden_bias_units = false);

  /// Network with the given weights (row-major, one vector per matrix).
  ReluMlp(std::vector<std::size_t> layer_dims, const std::vector<Vector>& weights, bool hidden_bias_units = false);

  /// Uniform in +-sqrt(6 / (d_in + d_out)) per matrix, bias columns at zero.
  static ReluMlp initialized(std::vector<std::size_t> layer_dims, bool hidden_bias_units, Rng& rng);

  std::span<const std::size_t> layer_dims() const { return layer_dims_; }
  std::size_t matrix_count() const { return layer_dims_.size() - 1; }
  /// L, the number of hidden layers.
  std::size_t hidden_layer_count() const { return layer_dims_.size() - 2; }
  std::size_t input_dim() const { return layer_dims_.front(); }
  std::size_t output_dim() const { return layer_dims_.back(); }
  bool has_hidden_bias_units() const { return hidden_bias_units_; }

  ConstMatrixView weight(std::size_t l) const;
  MatrixView weight(std::size_t l);

  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  /// Clears entries that belong to frozen bias rows.
  void mask_frozen(std::span<double> gradient) const;

  /// Throws DomainError if any weight is NaN or infinite.
  void check_finite() const;

  bool same_shape(const ReluMlp& other) const {
    return layer_dims_ == other.layer_dims_ && hidden_bias_units_ == other.hidden_bias_units_;
  }

  bool operator==(const ReluMlp&) const = default;

 private:
  void set_frozen_rows();

  std::vector<std::size_t> layer_dims_;
  std::vector<std::size_t> offsets_;
  Vector params_;
  bool hidden_bias_units_ = false;
};

/// Bit-level equality of all parameters (distinguishes -0.0 from 0.0).
bool bitwise_equal(const ReluMlp& a, const ReluMlp& b);

/// f(x; theta). `x` must already carry the trailing constant 1.
Vector forward(const ReluMlp& model, std::span<const double> x);

/// Logits for a raw feature vector (the constant 1 is appended here).
Vector forward_features(const ReluMlp& model, std::span<const double> features);

double log_sum_exp(std::span<const double> logits);
Vector softmax(std::span<const double> logits);

/// -log softmax(logits)[label], via log-sum-exp.
double cross_entropy_loss(std::span<const double> logits, std::size_t label, std::size_t class_count);

std::size_t argmax(std::span<const double> values);

/// Sum over input-to-output paths of the product of absolute edge weights,
/// evaluated as 1^T |W_L| ... |W_0| 1.
double path_norm_proxy(const ReluMlp& model);

}  // namespace flnoise
