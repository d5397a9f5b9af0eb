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

#include "flnoise/figures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "flnoise/errors.hpp"
#include "flnoise/regression.hpp"
#include "flnoise/round_metrics.hpp"
#include "flnoise/text.hpp"

namespace flnoise {
namespace {

struct Loaded {
  const CellRecord* cell;
  MetricsTable table;
};

std::vector<Loaded> load_cells(const RunManifest& m) {
  if (m.cells.empty()) throw DomainError("figure: manifest has no cells");
  std::string missing;
  for (const auto& c : m.cells) {
    if (c.status != CellStatus::complete || !std::filesystem::exists(m.resolve(c.metrics))) {
      missing += (missing.empty() ? "" : ", ") + c.run_id;
    }
  }
  if (!missing.empty()) throw ParseError("figure: missing cells: " + missing);
  std::vector<Loaded> out;
  for (const auto& c : m.cells) {
    std::ifstream in(m.resolve(c.metrics));
    Loaded l{&c, read_metrics_csv(in)};
    if (l.table.rows.empty()) throw ParseError("figure: " + c.metrics.string() + " has no rows");
    out.push_back(std::move(l));
  }
  return out;
}

void noise_header(std::ostream& out, std::size_t clients) {
  for (std::size_t k = 1; k <= clients; ++k) out << ",wp_" << k;
}

void noise_values(std::ostream& out, const std::vector<double>& noise) {
  for (double wp : noise) out << ',' << format_double(wp);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void fig3a(const std::vector<Loaded>& cells, const RunManifest& m, std::ostream& out) {
  out << "run_id,strategy,architecture";
  noise_header(out, m.clients);
  out << ",round,pnp\n";
  for (const auto& l : cells) {
    for (const auto& r : l.table.rows) {
      out << l.cell->run_id << ',' << to_string(l.cell->strategy) << ',' << l.cell->architecture;
      noise_values(out, l.cell->noise);
      out << ',' << r.round << ',' << format_double(r.path_norm) << '\n';
    }
  }
}

void fig3b(const std::vector<Loaded>& cells, const RunManifest& m, std::ostream& out) {
  out << "run_id,strategy,depth,layer_dims";
  noise_header(out, m.clients);
  out << ",round,pnp,log_round,log_pnp\n";
  for (const auto& l : cells) {
    const auto& dims = m.architectures[l.cell->architecture];
    std::string dim_text;
    for (std::size_t i = 0; i < dims.size(); ++i) dim_text += (i ? "-" : "") + std::to_string(dims[i]);
    for (const auto& r : l.table.rows) {
      out << l.cell->run_id << ',' << to_string(l.cell->strategy) << ',' << dims.size() - 1 << ',' << dim_text;
      noise_values(out, l.cell->noise);
      out << ',' << r.round << ',' << format_double(r.path_norm) << ','
          << format_double(std::log(static_cast<double>(r.round))) << ',';
      if (r.path_norm > 0.0) out << format_double(std::log(r.path_norm));
      out << '\n';
    }
  }
}

void fig45(const std::vector<Loaded>& cells, const RunManifest& m, std::ostream& out, bool fitted) {
  out << "strategy,architecture";
  noise_header(out, m.clients);
  out << ",accuracy" << (fitted ? ",fitted" : "") << '\n';
  std::map<std::pair<int, std::size_t>, std::vector<const Loaded*>> groups;
  for (const auto& l : cells) groups[{static_cast<int>(l.cell->strategy), l.cell->architecture}].push_back(&l);
  for (const auto& [key, members] : groups) {
    std::vector<double> coef;
    if (fitted) {
      std::vector<AccuracyPoint> pts;
      for (const Loaded* l : members) pts.push_back({l->cell->noise, l->table.rows.back().test_accuracy});
      coef = fit_accuracy_vs_noise(pts).coefficients;
    }
    for (const Loaded* l : members) {
      out << to_string(l->cell->strategy) << ',' << l->cell->architecture;
      noise_values(out, l->cell->noise);
      out << ',' << format_double(l->table.rows.back().test_accuracy);
      if (fitted) {
        double y = coef[0];
        for (std::size_t k = 0; k < l->cell->noise.size(); ++k) y += coef[k + 1] * l->cell->noise[k];
        out << ',' << format_double(y);
      }
      out << '\n';
    }
  }
}

void fig67(const std::vector<Loaded>& cells, const RunManifest& m, std::ostream& out, bool loss) {
  out << "run_id,strategy,architecture";
  noise_header(out, m.clients);
  out << ",round," << (loss ? "mean_client_loss" : "test_accuracy") << '\n';
  for (const auto& l : cells) {
    for (const auto& r : l.table.rows) {
      out << l.cell->run_id << ',' << to_string(l.cell->strategy) << ',' << l.cell->architecture;
      noise_values(out, l.cell->noise);
      out << ',' << r.round << ',' << format_double(loss ? mean(r.client_losses) : r.test_accuracy) << '\n';
    }
  }
}

void fig8(const std::vector<Loaded>& cells, const RunManifest& m, std::ostream& out) {
  out << "strategy,architecture";
  noise_header(out, m.clients);
  out << ",final_accuracy\n";
  for (const auto& l : cells) {
    out << to_string(l.cell->strategy) << ',' << l.cell->architecture;
    noise_values(out, l.cell->noise);
    out << ',' << format_double(l.table.rows.back().test_accuracy) << '\n';
  }
}

}  // namespace

std::vector<std::string> figure_ids() { return {"fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8"}; }

void emit_figure_data(const RunManifest& manifest, std::string_view figure, std::ostream& out) {
  bool known = false;
  for (const auto& id : figure_ids()) known = known || id == figure;
  if (!known) throw DomainError("figure: unknown selector '" + std::string(figure) + "'");
  const auto cells = load_cells(manifest);
  if (figure == "fig3a") {
    fig3a(cells, manifest, out);
  } else if (figure == "fig3b") {
    fig3b(cells, manifest, out);
  } else if (figure == "fig4") {
    fig45(cells, manifest, out, false);
  } else if (figure == "fig5") {
    fig45(cells, manifest, out, true);
  } else if (figure == "fig6") {
    fig67(cells, manifest, out, true);
  } else if (figure == "fig7") {
    fig67(cells, manifest, out, false);
  } else {
    fig8(cells, manifest, out);
  }
}

}  // namespace flnoise
