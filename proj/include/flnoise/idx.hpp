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
#include <filesystem>
#include <span>
#include <vector>

#include "flnoise/labeled_dataset.hpp"

namespace flnoise {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
inline constexpr std::size_t kIdxClassCount = 10;

/// Reads an MNIST-layout IDX pair. Pixels are scaled by 1/255 into [0, 1].
/// `limit` keeps the first `limit` examples; 0 keeps all.
/// Throws ParseError naming the offending field on a malformed file.
LabeledDataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                        std::size_t limit = 0);

LabeledDataset parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                         std::size_t limit = 0);

struct IdxBytes {
  std::vector<std::uint8_t> images;
  std::vector<std::uint8_t> labels;
};

/// Encodes a dataset back to IDX. Features are quantized to round(255 * v);
/// `rows * cols` must equal the feature dimension.
IdxBytes encode_idx(const LabeledDataset& dataset, std::uint32_t rows, std::uint32_t cols);

void write_idx(const LabeledDataset& dataset, std::uint32_t rows, std::uint32_t cols,
               const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

}  // namespace flnoise
