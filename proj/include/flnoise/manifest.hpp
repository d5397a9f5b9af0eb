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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "flnoise/federation.hpp"

namespace flnoise {

enum class CellStatus { pending, complete };

struct CellRecord {
  std::string run_id;
  StrategyKind strategy = StrategyKind::fedavg;
  std::size_t architecture = 0;  // index into RunManifest::architectures
  std::vector<double> noise;
  std::filesystem::path metrics;  // relative to the manifest's directory
  CellStatus status = CellStatus::pending;
};

/// Line-oriented record of a sweep:
///
///   flnoise-manifest 1
///   name <name>
///   spec_hash <16 hex digits>
///   version <software version>
///   master_seed <n>
///   seed <purpose> <n>              one per derived seed
///   clients <N>
///   rounds <R>
///   architecture <index> <d0,d1,...>
///   cell <run_id> <status> <strategy> <architecture> <wp_1,...> <metrics path>
///   summary <path>
///   regression <path>
struct RunManifest {
  std::string name;
  std::uint64_t spec_hash = 0;
  std::string version;
  std::uint64_t master_seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  std::size_t clients = 0;
  std::size_t rounds = 0;
  std::vector<std::vector<std::size_t>> architectures;
  std::vector<CellRecord> cells;
  std::filesystem::path summary;
  std::filesystem::path regression;
  /// Directory the manifest was read from or written to; not serialized.
  std::filesystem::path root;

  std::filesystem::path resolve(const std::filesystem::path& relative) const { return root / relative; }
};

std::string_view to_string(CellStatus status);

void write_manifest(std::ostream& out, const RunManifest& manifest);
/// Throws ParseError on malformed input.
RunManifest parse_manifest(std::istream& in);
RunManifest read_manifest(const std::filesystem::path& path);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string hex64(std::uint64_t v);

}  // namespace flnoise
