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

#include "flnoise/labeled_dataset.hpp"

#include <string>

#include "flnoise/errors.hpp"

namespace flnoise {

LabeledDataset::LabeledDataset(std::size_t feature_dim, std::vector<double> features, std::vector<Label> labels,
                               std::size_t class_count, Provenance provenance)
    : feature_dim_(feature_dim),
      features_(std::move(features)),
      labels_(std::move(labels)),
      class_count_(class_count),
      provenance_(provenance) {
  if (labels_.empty()) throw DomainError("dataset: no examples");
  if (feature_dim_ == 0) throw ShapeError("dataset: feature dimension is zero");
  if (features_.size() != labels_.size() * feature_dim_) {
    throw ShapeError("dataset: " + std::to_string(features_.size()) + " feature values for " +
                     std::to_string(labels_.size()) + " examples of dimension " + std::to_string(feature_dim_));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= class_count_) {
      throw DomainError("dataset: label " + std::to_string(labels_[i]) + " at example " + std::to_string(i) +
                        " is not below class count " + std::to_string(class_count_));
    }
  }
  for (double v : features_) {
    // also rejects NaN
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("dataset: feature value outside [0, 1]");
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> features;
  std::vector<Label> labels;
  features.reserve(indices.size() * feature_dim_);
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw DomainError("dataset: subset index out of range");
    auto row = feature(i);
    features.insert(features.end(), row.begin(), row.end());
    labels.push_back(labels_[i]);
  }
  return LabeledDataset(feature_dim_, std::move(features), std::move(labels), class_count_, provenance_);
}

LabeledDataset LabeledDataset::relabeled(std::vector<Label> labels, Provenance provenance) const {
  if (labels.size() != labels_.size()) throw ShapeError("dataset: relabel size mismatch");
  return LabeledDataset(feature_dim_, features_, std::move(labels), class_count_, provenance);
}

}  // namespace flnoise
