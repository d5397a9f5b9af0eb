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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flnoise {

/// Everything recorded about the global model after one round.
struct RoundMetrics {
  std::size_t round = 0;
  std::vector<double> client_losses;
  double test_accuracy = 0.0;
  double empirical_risk = 0.0;     // L
  double ground_truth_risk = 0.0;  // L_dagger
  double generalization_error = 0.0;
  double path_norm = 0.0;
  std::string bound_variant;          // empty when no bound was computed
  std::optional<double> bound_value;  // empty cells in the CSV when absent
  std::optional<bool> bound_holds;
};

/// Identifies the run a metrics table belongs to.
struct RunLabel {
  std::string run_id;
  std::string strategy;
  std::vector<double> noise;  // wp_1 .. wp_N
};

/// Throws DomainError unless G == |L_dagger - L| within 1e-12, the accuracy
/// lies in [0, 1] and the path-norm is nonnegative.
void check_invariants(const RoundMetrics& m);

/// Header: run_id,strategy,wp_1..wp_N,round,loss_1..loss_N,test_accuracy,
/// L,L_dagger,G,pnp,bound_variant,bound_value,bound_holds
void write_metrics_header(std::ostream& out, std::size_t clients);
void write_metrics_row(std::ostream& out, const RunLabel& label, const RoundMetrics& m);

struct MetricsTable {
  RunLabel label;
  std::vector<RoundMetrics> rows;
};

/// Parses a file written by the two functions above. Throws ParseError.
MetricsTable read_metrics_csv(std::istream& in);

}  // namespace flnoise
