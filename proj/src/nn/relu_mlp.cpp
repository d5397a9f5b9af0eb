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

#include "flnoise/relu_mlp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "flnoise/errors.hpp"

namespace flnoise {

ReluMlp::ReluMlp(std::vector<std::size_t> layer_dims, bool hidden_bias_units)
    : layer_dims_(std::move(layer_dims)), hidden_bias_units_(hidden_bias_units) {
  if (layer_dims_.size() < 2) throw ShapeError("relu mlp: need at least input and output widths");
  for (std::size_t d : layer_dims_) {
    if (d == 0) throw ShapeError("relu mlp: layer width must be positive");
  }
  if (hidden_bias_units_) {
    for (std::size_t l = 1; l + 1 < layer_dims_.size(); ++l) {
      if (layer_dims_[l] < 2) throw ShapeError("relu mlp: hidden layer too narrow for a bias unit");
    }
  }
  offsets_.push_back(0);
  for (std::size_t l = 0; l + 1 < layer_dims_.size(); ++l) {
    offsets_.push_back(offsets_.back() + layer_dims_[l] * layer_dims_[l + 1]);
  }
  params_.assign(offsets_.back(), 0.0);
  set_frozen_rows();
}

ReluMlp::ReluMlp(std::vector<std::size_t> layer_dims, const std::vector<Vector>& weights, bool hidden_bias_units)
    : ReluMlp(std::move(layer_dims), hidden_bias_units) {
  if (weights.size() != matrix_count()) {
    throw ShapeError("relu mlp: " + std::to_string(weights.size()) + " weight matrices for " +
                     std::to_string(matrix_count()) + " layers");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].size() != offsets_[l + 1] - offsets_[l]) {
      throw ShapeError("relu mlp: matrix " + std::to_string(l) + " must be " + std::to_string(layer_dims_[l + 1]) +
                       " x " + std::to_string(layer_dims_[l]));
    }
    std::copy(weights[l].begin(), weights[l].end(), params_.begin() + static_cast<std::ptrdiff_t>(offsets_[l]));
  }
  set_frozen_rows();
  check_finite();
}

ReluMlp ReluMlp::initialized(std::vector<std::size_t> layer_dims, bool hidden_bias_units, Rng& rng) {
  ReluMlp model(std::move(layer_dims), hidden_bias_units);
  for (std::size_t l = 0; l < model.matrix_count(); ++l) {
    MatrixView w = model.weight(l);
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    for (std::size_t r = 0; r < w.rows; ++r) {
      for (std::size_t c = 0; c + 1 < w.cols; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
  }
  model.set_frozen_rows();
  return model;
}

ConstMatrixView ReluMlp::weight(std::size_t l) const {
  return {layer_dims_.at(l + 1), layer_dims_[l],
          std::span<const double>(params_).subspan(offsets_[l], offsets_[l + 1] - offsets_[l])};
}

MatrixView ReluMlp::weight(std::size_t l) {
  return {layer_dims_.at(l + 1), layer_dims_[l],
          std::span<double>(params_).subspan(offsets_[l], offsets_[l + 1] - offsets_[l])};
}

void ReluMlp::set_frozen_rows() {
  if (!hidden_bias_units_) return;
  for (std::size_t l = 0; l + 1 < matrix_count(); ++l) {
    MatrixView w = weight(l);
    auto last = w.row(w.rows - 1);
    std::fill(last.begin(), last.end(), 0.0);
    last.back() = 1.0;
  }
}

void ReluMlp::mask_frozen(std::span<double> gradient) const {
  if (gradient.size() != params_.size()) throw ShapeError("relu mlp: gradient size mismatch");
  if (!hidden_bias_units_) return;
  for (std::size_t l = 0; l + 1 < matrix_count(); ++l) {
    const std::size_t cols = layer_dims_[l];
    const std::size_t start = offsets_[l + 1] - cols;
    std::fill_n(gradient.begin() + static_cast<std::ptrdiff_t>(start), cols, 0.0);
  }
}

void ReluMlp::check_finite() const {
  for (double v : params_) {
    if (!std::isfinite(v)) throw DomainError("relu mlp: non-finite weight");
  }
}

bool bitwise_equal(const ReluMlp& a, const ReluMlp& b) {
  if (!a.same_shape(b)) return false;
  auto pa = a.parameters();
  auto pb = b.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(pa[i]) != std::bit_cast<std::uint64_t>(pb[i])) return false;
  }
  return true;
}

Vector forward(const ReluMlp& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw ShapeError("forward: input has " + std::to_string(x.size()) + " components, model expects " +
                     std::to_string(model.input_dim()));
  }
  Vector act(x.begin(), x.end());
  for (std::size_t l = 0; l < model.matrix_count(); ++l) {
    ConstMatrixView w = model.weight(l);
    Vector next(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
      auto row = w.row(r);
      double s = 0.0;
      for (std::size_t c = 0; c < w.cols; ++c) s += row[c] * act[c];
      next[r] = s;
    }
    if (l + 1 < model.matrix_count()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    }
    act = std::move(next);
  }
  return act;
}

Vector forward_features(const ReluMlp& model, std::span<const double> features) {
  Vector x(features.begin(), features.end());
  x.push_back(1.0);
  return forward(model, x);
}

double log_sum_exp(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("log-sum-exp of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (double v : logits) s += std::exp(v - m);
  return m + std::log(s);
}

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double s = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    s += out[i];
  }
  for (double& v : out) v /= s;
  return out;
}

double cross_entropy_loss(std::span<const double> logits, std::size_t label, std::size_t class_count) {
  if (logits.size() != class_count) throw ShapeError("cross entropy: logits length differs from class count");
  if (label >= class_count) {
    throw DomainError("cross entropy: label " + std::to_string(label) + " outside [0, " + std::to_string(class_count) +
                      ")");
  }
  // LSE >= max logit >= logits[label]; clamp away a rounding-level negative
  return std::max(0.0, log_sum_exp(logits) - logits[label]);
}

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace flnoise
