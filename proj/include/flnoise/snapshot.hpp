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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "flnoise/relu_mlp.hpp"

namespace flnoise {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Model snapshot layout, all little-endian:
///   "RMLP" | version u32 | layer count u32 | flags u32
///   layer_dims as u32 (layer count entries)
///   each weight matrix row-major as f64, in layer order
/// Flags bit 0 marks hidden bias units; the remaining bits are zero.
std::vector<std::uint8_t> encode_snapshot(const ReluMlp& model);
ReluMlp decode_snapshot(std::span<const std::uint8_t> bytes);

void save_snapshot(const ReluMlp& model, const std::filesystem::path& path);
ReluMlp load_snapshot(const std::filesystem::path& path);

}  // namespace flnoise
