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

#include "flnoise/idx.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include "flnoise/errors.hpp"

namespace flnoise {
namespace {

class BigEndianReader {
 public:
  BigEndianReader(std::span<const std::uint8_t> bytes, const char* file) : bytes_(bytes), file_(file) {}

  std::uint32_t u32(const char* field) {
    require(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    require(n, field);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void require(std::size_t n, const char* field) const {
    if (bytes_.size() - pos_ < n) throw ParseError(std::string(file_) + ": truncated " + field);
  }

  std::span<const std::uint8_t> bytes_;
  const char* file_;
  std::size_t pos_ = 0;
};

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

LabeledDataset parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                         std::size_t limit) {
  BigEndianReader img(images, "images");
  const std::uint32_t img_magic = img.u32("magic");
  if (img_magic != kIdxImagesMagic) {
    throw ParseError("images: wrong magic " + hex32(img_magic) + " (expected " + hex32(kIdxImagesMagic) + ")");
  }
  const std::uint32_t count = img.u32("item count");
  const std::uint32_t rows = img.u32("row count");
  const std::uint32_t cols = img.u32("column count");

  BigEndianReader lab(labels, "labels");
  const std::uint32_t lab_magic = lab.u32("magic");
  if (lab_magic != kIdxLabelsMagic) {
    throw ParseError("labels: wrong magic " + hex32(lab_magic) + " (expected " + hex32(kIdxLabelsMagic) + ")");
  }
  const std::uint32_t label_count = lab.u32("item count");
  if (label_count != count) {
    throw ParseError("item count mismatch: images " + std::to_string(count) + ", labels " +
                     std::to_string(label_count));
  }
  if (count == 0) throw ParseError("images: item count is zero");
  if (rows == 0 || cols == 0) throw ParseError("images: zero image dimension");

  const std::size_t keep = (limit == 0 || limit > count) ? count : limit;
  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  // Validate the declared payload even when only a prefix is kept.
  auto pixels = img.take(static_cast<std::size_t>(count) * dim, "pixel data");
  auto raw_labels = lab.take(count, "label data");

  std::vector<double> features(keep * dim);
  for (std::size_t i = 0; i < features.size(); ++i) features[i] = pixels[i] / 255.0;
  std::vector<Label> out_labels(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    if (raw_labels[i] >= kIdxClassCount) {
      throw ParseError("labels: value " + std::to_string(raw_labels[i]) + " at item " + std::to_string(i) +
                       " is not a digit class");
    }
    out_labels[i] = raw_labels[i];
  }
  return LabeledDataset(dim, std::move(features), std::move(out_labels), kIdxClassCount);
}

LabeledDataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                        std::size_t limit) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);
  return parse_idx(images, labels, limit);
}

IdxBytes encode_idx(const LabeledDataset& dataset, std::uint32_t rows, std::uint32_t cols) {
  if (static_cast<std::size_t>(rows) * cols != dataset.feature_dim()) {
    throw ShapeError("idx: image shape does not match feature dimension");
  }
  if (dataset.class_count() > 256) throw DomainError("idx: labels do not fit in a byte");
  IdxBytes out;
  put_u32(out.images, kIdxImagesMagic);
  put_u32(out.images, static_cast<std::uint32_t>(dataset.size()));
  put_u32(out.images, rows);
  put_u32(out.images, cols);
  for (double v : dataset.features()) out.images.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  put_u32(out.labels, kIdxLabelsMagic);
  put_u32(out.labels, static_cast<std::uint32_t>(dataset.size()));
  for (Label y : dataset.labels()) out.labels.push_back(static_cast<std::uint8_t>(y));
  return out;
}

void write_idx(const LabeledDataset& dataset, std::uint32_t rows, std::uint32_t cols,
               const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  const auto bytes = encode_idx(dataset, rows, cols);
  write_file(images_path, bytes.images);
  write_file(labels_path, bytes.labels);
}

}  // namespace flnoise
