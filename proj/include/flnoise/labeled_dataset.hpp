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
#include <variant>
#include <vector>

namespace flnoise {

using Label = std::uint32_t;

struct Clean {
  bool operator==(const Clean&) const = default;
};

struct Noised {
  double rate = 0.0;
  bool operator==(const Noised&) const = default;
};

using Provenance = std::variant<Clean, Noised>;

/// A nonempty set of labelled examples. Features live in [0, 1]^d and are
/// stored row-major without the constant bias component; the model appends it.
class LabeledDataset {
 public:
  LabeledDataset(std::size_t feature_dim, std::vector<double> features, std::vector<Label> labels,
                 std::size_t class_count, Provenance provenance = Clean{});

  std::size_t size() const { return labels_.size(); }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t class_count() const { return class_count_; }
  const Provenance& provenance() const { return provenance_; }

  std::span<const double> feature(std::size_t i) const {
    return std::span<const double>(features_).subspan(i * feature_dim_, feature_dim_);
  }
  Label label(std::size_t i) const { return labels_[i]; }

  std::span<const double> features() const { return features_; }
  std::span<const Label> labels() const { return labels_; }

  /// Examples at `indices`, in that order. Provenance is kept.
  LabeledDataset subset(std::span<const std::size_t> indices) const;

  /// Same features with a replacement label vector.
  LabeledDataset relabeled(std::vector<Label> labels, Provenance provenance) const;

  bool operator==(const LabeledDataset&) const = default;

 private:
  std::size_t feature_dim_;
  std::vector<double> features_;
  std::vector<Label> labels_;
  std::size_t class_count_;
  Provenance provenance_;
};

}  // namespace flnoise
