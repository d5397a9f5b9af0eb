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
#include <filesystem>
#include <fstream>
#include <span>

#include "flnoise/federation.hpp"

namespace flnoise {

/// Per-round event log: one tab-separated line per round holding the round
/// index, each client's mean training loss and the round's wall time.
/// Optionally writes a model snapshot every `snapshot_every` rounds.
class RoundLogger {
 public:
  RoundLogger(const std::filesystem::path& log_path, std::filesystem::path snapshot_dir = {},
              std::size_t snapshot_every = 0);

  void operator()(const ServerState& server, std::span<const ClientState> clients, const RoundOutcome& outcome);

  /// Snapshot file name for round t inside the snapshot directory.
  static std::filesystem::path snapshot_name(std::size_t round);

 private:
  std::ofstream log_;
  std::filesystem::path snapshot_dir_;
  std::size_t snapshot_every_;
};

}  // namespace flnoise
