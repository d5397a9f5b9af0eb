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

#include "flnoise/relu_mlp.hpp"

namespace flnoise {

double path_norm_proxy(const ReluMlp& model) {
  // v_l[j] = total absolute path weight from all inputs to unit j of layer l
  Vector v(model.input_dim(), 1.0);
  for (std::size_t l = 0; l < model.matrix_count(); ++l) {
    ConstMatrixView w = model.weight(l);
    Vector next(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
      auto row = w.row(r);
      double s = 0.0;
      for (std::size_t c = 0; c < w.cols; ++c) s += std::abs(row[c]) * v[c];
      next[r] = s;
    }
    v = std::move(next);
  }
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace flnoise
