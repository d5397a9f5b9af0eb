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

#include "flnoise/round_metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "flnoise/errors.hpp"
#include "flnoise/text.hpp"

namespace flnoise {
namespace {

constexpr double kIdentityTolerance = 1e-12;
constexpr std::size_t kFixedColumns = 11;  // run_id strategy round acc L L' G pnp variant value holds

double field_double(std::string_view s, std::size_t line) {
  auto v = parse_double(s);
  if (!v) throw ParseError("metrics line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return *v;
}

}  // namespace

void check_invariants(const RoundMetrics& m) {
  if (std::abs(m.generalization_error - std::abs(m.ground_truth_risk - m.empirical_risk)) > kIdentityTolerance) {
    throw DomainError("metrics: G differs from |L_dagger - L| in round " + std::to_string(m.round));
  }
  if (!(m.test_accuracy >= 0.0 && m.test_accuracy <= 1.0)) {
    throw DomainError("metrics: accuracy outside [0, 1] in round " + std::to_string(m.round));
  }
  if (!(m.path_norm >= 0.0)) throw DomainError("metrics: negative path-norm in round " + std::to_string(m.round));
}

void write_metrics_header(std::ostream& out, std::size_t clients) {
  out << "run_id,strategy";
  for (std::size_t k = 1; k <= clients; ++k) out << ",wp_" << k;
  out << ",round";
  for (std::size_t k = 1; k <= clients; ++k) out << ",loss_" << k;
  out << ",test_accuracy,L,L_dagger,G,pnp,bound_variant,bound_value,bound_holds\n";
}

void write_metrics_row(std::ostream& out, const RunLabel& label, const RoundMetrics& m) {
  if (m.client_losses.size() != label.noise.size()) {
    throw ShapeError("metrics: loss count differs from client count");
  }
  out << label.run_id << ',' << label.strategy;
  for (double wp : label.noise) out << ',' << format_double(wp);
  out << ',' << m.round;
  for (double l : m.client_losses) out << ',' << format_double(l);
  out << ',' << format_double(m.test_accuracy) << ',' << format_double(m.empirical_risk) << ','
      << format_double(m.ground_truth_risk) << ',' << format_double(m.generalization_error) << ','
      << format_double(m.path_norm) << ',' << m.bound_variant << ',';
  if (m.bound_value) out << format_double(*m.bound_value);
  out << ',';
  if (m.bound_holds) out << (*m.bound_holds ? "true" : "false");
  out << '\n';
}

MetricsTable read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("metrics: empty file");
  const auto header = split(line, ',');
  if (header.size() < kFixedColumns || (header.size() - kFixedColumns) % 2 != 0 || header[0] != "run_id") {
    throw ParseError("metrics: unrecognized header");
  }
  const std::size_t n = (header.size() - kFixedColumns) / 2;

  MetricsTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      throw ParseError("metrics line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(f.size()));
    }
    RunLabel label{std::string(f[0]), std::string(f[1]), {}};
    for (std::size_t k = 0; k < n; ++k) label.noise.push_back(field_double(f[2 + k], line_no));
    if (table.rows.empty()) {
      table.label = label;
    } else if (label.run_id != table.label.run_id || label.strategy != table.label.strategy ||
               label.noise != table.label.noise) {
      throw ParseError("metrics line " + std::to_string(line_no) + ": mixes runs");
    }
    std::size_t c = 2 + n;
    RoundMetrics m;
    auto round = parse_unsigned(f[c++]);
    if (!round) throw ParseError("metrics line " + std::to_string(line_no) + ": bad round");
    m.round = static_cast<std::size_t>(*round);
    for (std::size_t k = 0; k < n; ++k) m.client_losses.push_back(field_double(f[c++], line_no));
    m.test_accuracy = field_double(f[c++], line_no);
    m.empirical_risk = field_double(f[c++], line_no);
    m.ground_truth_risk = field_double(f[c++], line_no);
    m.generalization_error = field_double(f[c++], line_no);
    m.path_norm = field_double(f[c++], line_no);
    m.bound_variant = std::string(f[c++]);
    if (!f[c].empty()) m.bound_value = field_double(f[c], line_no);
    ++c;
    if (f[c] == "true") {
      m.bound_holds = true;
    } else if (f[c] == "false") {
      m.bound_holds = false;
    } else if (!f[c].empty()) {
      throw ParseError("metrics line " + std::to_string(line_no) + ": bad bound_holds");
    }
    table.rows.push_back(std::move(m));
  }
  return table;
}

}  // namespace flnoise
