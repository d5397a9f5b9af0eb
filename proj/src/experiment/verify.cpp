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

#include "flnoise/verify.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "flnoise/errors.hpp"
#include "flnoise/experiment_spec.hpp"
#include "flnoise/round_metrics.hpp"
#include "flnoise/text.hpp"

namespace flnoise {
namespace {

void check_spec(const RunManifest& m, VerifyReport& report) {
  const auto path = m.root / "spec.txt";
  if (!std::filesystem::exists(path)) {
    report.failures.push_back("spec.txt is missing");
    return;
  }
  try {
    std::ifstream in(path);
    const ExperimentSpec spec = parse_experiment_spec(in);
    if (spec_hash(spec) != m.spec_hash) report.failures.push_back("spec.txt does not hash to the manifest's spec_hash");
  } catch (const std::exception& e) {
    report.failures.push_back(std::string("spec.txt: ") + e.what());
  }
}

void check_cell(const RunManifest& m, const CellRecord& cell, VerifyReport& report,
                std::map<std::string, RoundMetrics>& last_rows) {
  const auto path = m.resolve(cell.metrics);
  if (!std::filesystem::exists(path)) {
    report.failures.push_back(cell.run_id + ": complete but " + cell.metrics.string() + " is missing");
    return;
  }
  MetricsTable table;
  try {
    std::ifstream in(path);
    table = read_metrics_csv(in);
  } catch (const std::exception& e) {
    report.failures.push_back(cell.run_id + ": " + e.what());
    return;
  }
  ++report.cells_checked;
  if (table.rows.size() != m.rounds) {
    report.failures.push_back(cell.run_id + ": " + std::to_string(table.rows.size()) + " rows for " +
                              std::to_string(m.rounds) + " rounds");
  }
  if (table.label.run_id != cell.run_id || table.label.noise != cell.noise) {
    report.failures.push_back(cell.run_id + ": metrics file belongs to a different cell");
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const RoundMetrics& r = table.rows[i];
    ++report.rows_checked;
    if (r.round != i + 1) report.failures.push_back(cell.run_id + ": rounds out of sequence at row " + std::to_string(i + 1));
    try {
      check_invariants(r);
    } catch (const std::exception& e) {
      report.failures.push_back(cell.run_id + ": " + e.what());
    }
    const bool asserted = r.bound_variant == "output_bound" || r.bound_variant == "path_norm";
    if (asserted && r.bound_holds != true) {
      report.failures.push_back(cell.run_id + ": bound fails in round " + std::to_string(r.round));
    }
    if (r.bound_value && r.bound_holds && *r.bound_holds != (r.generalization_error <= *r.bound_value + 1e-9)) {
      report.failures.push_back(cell.run_id + ": bound_holds flag disagrees with the values in round " +
                                std::to_string(r.round));
    }
  }
  if (!table.rows.empty()) last_rows[cell.run_id] = table.rows.back();
}

void check_summary(const RunManifest& m, const std::map<std::string, RoundMetrics>& last_rows, VerifyReport& report) {
  const auto path = m.resolve(m.summary);
  if (!std::filesystem::exists(path)) {
    report.failures.push_back("summary file is missing");
    return;
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  std::size_t acc_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "final_accuracy") acc_col = i;
  }
  if (acc_col == header.size()) {
    report.failures.push_back("summary has no final_accuracy column");
    return;
  }
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      report.failures.push_back("summary: malformed row");
      continue;
    }
    ++seen;
    const auto it = last_rows.find(std::string(f[0]));
    if (it == last_rows.end()) continue;
    if (f[acc_col] != format_double(it->second.test_accuracy)) {
      report.failures.push_back("summary accuracy of " + std::string(f[0]) + " differs from its last round");
    }
  }
  if (seen != m.cells.size()) report.failures.push_back("summary row count differs from the cell count");
}

}  // namespace

VerifyReport verify_manifest(const RunManifest& manifest) {
  VerifyReport report;
  if (manifest.cells.empty()) report.failures.push_back("manifest has no cells");
  check_spec(manifest, report);
  std::map<std::string, RoundMetrics> last_rows;
  for (const auto& cell : manifest.cells) {
    if (cell.status != CellStatus::complete) {
      report.failures.push_back(cell.run_id + ": not complete");
      continue;
    }
    check_cell(manifest, cell, report, last_rows);
  }
  check_summary(manifest, last_rows, report);
  return report;
}

}  // namespace flnoise
