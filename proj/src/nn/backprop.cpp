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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "batch_engine.hpp"
#include "flnoise/errors.hpp"
#include "flnoise/training.hpp"

namespace flnoise {
namespace detail {
namespace {

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

BatchEngine::BatchEngine(const ReluMlp& model, std::size_t max_batch)
    : dims_(model.layer_dims().begin(), model.layer_dims().end()) {
  const std::size_t widest = *std::max_element(dims_.begin(), dims_.end());
  acts_.resize(dims_.size());
  for (std::size_t l = 0; l < dims_.size(); ++l) acts_[l].resize(max_batch * dims_[l]);
  transposed_.resize(dims_.size() - 1);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) transposed_[l].resize(dims_[l] * dims_[l + 1]);
  delta_.resize(max_batch * widest);
  delta_prev_.resize(max_batch * widest);
  std::size_t largest_matrix = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) largest_matrix = std::max(largest_matrix, dims_[l] * dims_[l + 1]);
  grad_t_.resize(largest_matrix);
}

void BatchEngine::load_inputs(const LabeledDataset& data, std::span<const std::size_t> indices) {
  const std::size_t d0 = dims_[0];
  if (data.feature_dim() + 1 != d0) {
    throw ShapeError("backward: features of dimension " + std::to_string(data.feature_dim()) +
                     " do not fit input width " + std::to_string(d0) + " (which includes the bias input)");
  }
  for (std::size_t b = 0; b < indices.size(); ++b) {
    if (indices[b] >= data.size()) throw DomainError("backward: example index out of range");
    auto x = data.feature(indices[b]);
    double* row = acts_[0].data() + b * d0;
    std::copy(x.begin(), x.end(), row);
    row[d0 - 1] = 1.0;
  }
}

void BatchEngine::propagate(const ReluMlp& model, std::size_t batch) {
  const std::size_t layers = dims_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = dims_[l];
    const std::size_t out = dims_[l + 1];
    ConstMatrixView w = model.weight(l);
    double* wt = transposed_[l].data();
    for (std::size_t r = 0; r < out; ++r) {
      for (std::size_t c = 0; c < in; ++c) wt[c * out + r] = w(r, c);
    }
    for (std::size_t b = 0; b < batch; ++b) {
      const double* a = acts_[l].data() + b * in;
      double* z = acts_[l + 1].data() + b * out;
      std::fill_n(z, out, 0.0);
      for (std::size_t c = 0; c < in; ++c) {
        if (a[c] != 0.0) axpy(a[c], wt + c * out, z, out);
      }
      if (l + 1 < layers) {
        for (std::size_t r = 0; r < out; ++r) z[r] = z[r] > 0.0 ? z[r] : 0.0;
      }
    }
  }
}

void BatchEngine::logits(const ReluMlp& model, const LabeledDataset& data, std::span<const std::size_t> indices,
                         Vector& out) {
  if (indices.size() * dims_[0] > acts_[0].size()) throw DomainError("forward: batch larger than engine capacity");
  load_inputs(data, indices);
  propagate(model, indices.size());
  const Vector& last = acts_.back();
  out.insert(out.end(), last.begin(), last.begin() + static_cast<std::ptrdiff_t>(indices.size() * dims_.back()));
}

double BatchEngine::gradient(const ReluMlp& model, const LabeledDataset& data, std::span<const std::size_t> indices,
                             std::span<double> gradient) {
  const std::size_t batch = indices.size();
  if (batch == 0) throw DomainError("backward: empty batch");
  if (batch * dims_[0] > acts_[0].size()) throw DomainError("backward: batch larger than engine capacity");
  if (gradient.size() != model.parameter_count()) throw ShapeError("backward: gradient buffer size mismatch");
  if (data.class_count() != dims_.back()) {
    throw ShapeError("backward: dataset has " + std::to_string(data.class_count()) + " classes, model outputs " +
                     std::to_string(dims_.back()));
  }
  load_inputs(data, indices);
  propagate(model, batch);

  const std::size_t layers = dims_.size() - 1;
  const std::size_t classes = dims_.back();
  const double inv_batch = 1.0 / static_cast<double>(batch);
  double loss_sum = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    std::span<const double> logits(acts_[layers].data() + b * classes, classes);
    const std::size_t y = data.label(indices[b]);
    loss_sum += cross_entropy_loss(logits, y, classes);
    const Vector p = softmax(logits);
    double* d = delta_.data() + b * classes;
    for (std::size_t j = 0; j < classes; ++j) d[j] = (p[j] - (j == y ? 1.0 : 0.0)) * inv_batch;
  }

  std::size_t offset = model.parameter_count();
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = dims_[l];
    const std::size_t out = dims_[l + 1];
    offset -= in * out;

    // dW^T[c][r] = sum_b a[b][c] * delta[b][r], accumulated row by row of W^T
    double* gt = grad_t_.data();
    std::fill_n(gt, in * out, 0.0);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* a = acts_[l].data() + b * in;
      const double* d = delta_.data() + b * out;
      for (std::size_t c = 0; c < in; ++c) {
        if (a[c] != 0.0) axpy(a[c], d, gt + c * out, out);
      }
    }
    double* g = gradient.data() + offset;
    for (std::size_t r = 0; r < out; ++r) {
      for (std::size_t c = 0; c < in; ++c) g[r * in + c] = gt[c * out + r];
    }

    if (l == 0) break;
    ConstMatrixView w = model.weight(l);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* d = delta_.data() + b * out;
      double* dp = delta_prev_.data() + b * in;
      std::fill_n(dp, in, 0.0);
      for (std::size_t r = 0; r < out; ++r) {
        if (d[r] != 0.0) axpy(d[r], w.row(r).data(), dp, in);
      }
      // ReLU derivative; the post-activation is positive iff the input was
      const double* a = acts_[l].data() + b * in;
      for (std::size_t c = 0; c < in; ++c) {
        if (!(a[c] > 0.0)) dp[c] = 0.0;
      }
    }
    std::swap(delta_, delta_prev_);
  }
  model.mask_frozen(gradient);
  return loss_sum * inv_batch;
}

}  // namespace detail

Vector forward_dataset(const ReluMlp& model, const LabeledDataset& data) {
  constexpr std::size_t chunk = 256;
  const std::size_t n = data.size();
  detail::BatchEngine engine(model, std::min(chunk, n));
  Vector out;
  out.reserve(n * model.output_dim());
  std::vector<std::size_t> indices;
  for (std::size_t start = 0; start < n; start += chunk) {
    indices.resize(std::min(chunk, n - start));
    std::iota(indices.begin(), indices.end(), start);
    engine.logits(model, data, indices, out);
  }
  return out;
}

Gradient backward(const ReluMlp& model, const LabeledDataset& data, std::span<const std::size_t> indices) {
  if (indices.empty()) throw DomainError("backward: empty batch");
  detail::BatchEngine engine(model, indices.size());
  Gradient out{Vector(model.parameter_count(), 0.0), 0.0};
  out.mean_loss = engine.gradient(model, data, indices, out.values);
  return out;
}

Gradient backward(const ReluMlp& model, const LabeledDataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return backward(model, data, all);
}

}  // namespace flnoise
