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

#include "flnoise/round_log.hpp"

#include <cstdio>

#include "flnoise/errors.hpp"
#include "flnoise/snapshot.hpp"
#include "flnoise/text.hpp"

namespace flnoise {

RoundLogger::RoundLogger(const std::filesystem::path& log_path, std::filesystem::path snapshot_dir,
                         std::size_t snapshot_every)
    : log_(log_path, std::ios::trunc), snapshot_dir_(std::move(snapshot_dir)), snapshot_every_(snapshot_every) {
  if (!log_) throw ConfigError(log_path.string() + ": cannot open event log");
  if (snapshot_every_ > 0) {
    if (snapshot_dir_.empty()) throw ConfigError("round log: snapshots requested without a directory");
    std::filesystem::create_directories(snapshot_dir_);
  }
}

void RoundLogger::operator()(const ServerState& server, std::span<const ClientState>, const RoundOutcome& outcome) {
  log_ << outcome.round;
  for (double loss : outcome.client_losses) log_ << '\t' << format_double(loss);
  log_ << '\t' << format_double(outcome.wall_seconds) << '\n';
  log_.flush();
  if (snapshot_every_ > 0 && outcome.round % snapshot_every_ == 0) {
    save_snapshot(server.global, snapshot_dir_ / snapshot_name(outcome.round));
  }
}

std::filesystem::path RoundLogger::snapshot_name(std::size_t round) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "round-%04zu.rmlp", round);
  return buf;
}

}  // namespace flnoise
