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

#include "flnoise/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "flnoise/errors.hpp"

namespace flnoise {
namespace {

constexpr char kMagic[4] = {'R', 'M', 'L', 'P'};
constexpr std::uint32_t kFlagHiddenBias = 1u;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class LittleEndianReader {
 public:
  explicit LittleEndianReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t read(int width, const char* field) {
    if (bytes_.size() - pos_ < static_cast<std::size_t>(width)) {
      throw ParseError(std::string("snapshot: truncated ") + field);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(read(4, field)); }
  double f64(const char* field) { return std::bit_cast<double>(read(8, field)); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const ReluMlp& model) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(model.layer_dims().size()));
  put_u32(out, model.has_hidden_bias_units() ? kFlagHiddenBias : 0u);
  for (std::size_t d : model.layer_dims()) put_u32(out, static_cast<std::uint32_t>(d));
  for (double v : model.parameters()) put_f64(out, v);
  return out;
}

ReluMlp decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw ParseError("snapshot: wrong magic");
  LittleEndianReader in(bytes.subspan(4));
  const std::uint32_t version = in.u32("version");
  if (version != kSnapshotVersion) throw ParseError("snapshot: unsupported version " + std::to_string(version));
  const std::uint32_t count = in.u32("layer count");
  const std::uint32_t flags = in.u32("flags");
  if ((flags & ~kFlagHiddenBias) != 0) throw ParseError("snapshot: unknown flag bits");
  if (count < 2) throw ParseError("snapshot: layer count below 2");
  std::vector<std::size_t> dims;
  for (std::uint32_t i = 0; i < count; ++i) dims.push_back(in.u32("layer dims"));

  std::vector<Vector> weights;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Vector w(dims[l] * dims[l + 1]);
    for (double& v : w) v = in.f64("weights");
    weights.push_back(std::move(w));
  }
  if (!in.done()) throw ParseError("snapshot: trailing bytes after weights");
  ReluMlp model(dims, weights, (flags & kFlagHiddenBias) != 0);
  // the bias-unit constructor re-imposes the frozen rows; they must already match
  std::size_t i = 0;
  for (const Vector& w : weights) {
    for (double v : w) {
      if (std::bit_cast<std::uint64_t>(v) != std::bit_cast<std::uint64_t>(model.parameters()[i++])) {
        throw ParseError("snapshot: frozen bias rows do not hold their fixed values");
      }
    }
  }
  return model;
}

void save_snapshot(const ReluMlp& model, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ReluMlp load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_snapshot(bytes);
}

}  // namespace flnoise
