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

#include "flnoise/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "flnoise/bound.hpp"
#include "flnoise/errors.hpp"
#include "flnoise/idx.hpp"
#include "flnoise/noise.hpp"
#include "flnoise/partition.hpp"
#include "flnoise/regression.hpp"
#include "flnoise/risk.hpp"
#include "flnoise/rng.hpp"
#include "flnoise/round_log.hpp"
#include "flnoise/round_metrics.hpp"
#include "flnoise/snapshot.hpp"
#include "flnoise/text.hpp"
#include "flnoise/training.hpp"
#include "json.hpp"

#ifndef FLNOISE_VERSION
#define FLNOISE_VERSION "unknown"
#endif

namespace flnoise {
namespace {

constexpr std::uint64_t tag(std::string_view purpose) { return fnv1a(purpose); }

struct Seeds {
  std::uint64_t partition;
  std::uint64_t noise;
  std::uint64_t init;
  std::uint64_t train;
  std::uint64_t data;
};

Seeds derive_seeds(std::uint64_t master) {
  return {derive_seed(master, {tag("partition")}), derive_seed(master, {tag("noise")}),
          derive_seed(master, {tag("init")}), derive_seed(master, {tag("train")}), derive_seed(master, {tag("data")})};
}

std::string cell_id(std::size_t index, StrategyKind strategy, std::size_t arch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "c%04zu-%s-a%zu", index, std::string(to_string(strategy)).c_str(), arch);
  return buf;
}

std::vector<CellRecord> enumerate_cells(const ExperimentSpec& spec) {
  std::vector<CellRecord> cells;
  for (std::size_t a = 0; a < spec.architectures.size(); ++a) {
    for (StrategyKind s : spec.strategies) {
      for (const auto& noise : spec.noise_grid) {
        CellRecord c;
        c.run_id = cell_id(cells.size(), s, a);
        c.strategy = s;
        c.architecture = a;
        c.noise = noise;
        c.metrics = std::filesystem::path("cells") / (c.run_id + ".csv");
        cells.push_back(std::move(c));
      }
    }
  }
  return cells;
}

void check_fits(const ExperimentSpec& spec, const LabeledDataset& data, const char* which) {
  for (const auto& dims : spec.architectures) {
    if (dims.front() != data.feature_dim() + 1 || dims.back() != data.class_count()) {
      throw ConfigError(std::string("spec: layer_dims do not fit the ") + which + " data (" +
                        std::to_string(data.feature_dim()) + " features + bias, " +
                        std::to_string(data.class_count()) + " classes)");
    }
  }
}

/// Everything a cell needs to emit one metrics row per round.
class CellRecorder {
 public:
  CellRecorder(const ExperimentSpec& spec, const CellRecord& cell, const SweepData& data,
               const std::vector<LabeledDataset>* noisy, const GridWorld* world)
      : spec_(spec), data_(data), noisy_(noisy), world_(world) {
    label_ = {cell.run_id, std::string(to_string(cell.strategy)), cell.noise};
    if (world_) {
      weights_.assign(world_->client_count(), 1.0 / static_cast<double>(world_->client_count()));
    } else {
      weights_ = client_weights(std::span<const LabeledDataset>(*noisy_));
      term_ = 0.0;
      for (std::size_t k = 0; k < noisy_->size(); ++k) {
        const auto& a = (*noisy_)[k];
        const auto& b = data_.clean_shards[k];
        std::size_t flipped = 0;
        for (std::size_t i = 0; i < a.size(); ++i) flipped += a.label(i) != b.label(i) ? 1 : 0;
        term_ += weights_[k] * 2.0 * static_cast<double>(flipped) / static_cast<double>(a.size());
      }
    }
    write_metrics_header(csv_, cell.noise.size());
  }

  void record(const ServerState& server, const RoundOutcome& outcome) {
    const ReluMlp& model = server.global;
    RoundMetrics m;
    m.round = outcome.round;
    m.client_losses = outcome.client_losses;
    m.path_norm = path_norm_proxy(model);
    OmegaSpec omega{spec_.bound_variant, spec_.bound_c0, outcome.round, spec_.federation.local.epochs};
    BoundReport report;
    if (world_) {
      m.test_accuracy = expected_accuracy(model, *world_);
      m.empirical_risk = empirical_risk(model, *world_, weights_);
      m.ground_truth_risk = ground_truth_risk(model, *world_, weights_);
      report = theorem1_bound(model, *world_, weights_, omega);
    } else {
      m.test_accuracy = accuracy(model, *data_.test);
      double cf = 0.0;
      const std::size_t c = model.output_dim();
      for (std::size_t k = 0; k < noisy_->size(); ++k) {
        const auto& noisy = (*noisy_)[k];
        const auto& clean = data_.clean_shards[k];
        const Vector logits = forward_dataset(model, noisy);
        double noisy_sum = 0.0;
        double clean_sum = 0.0;
        for (std::size_t i = 0; i < noisy.size(); ++i) {
          std::span<const double> row(logits.data() + i * c, c);
          noisy_sum += cross_entropy_loss(row, noisy.label(i), c);
          clean_sum += cross_entropy_loss(row, clean.label(i), c);
        }
        const double n = static_cast<double>(noisy.size());
        m.empirical_risk += weights_[k] * (noisy_sum / n);
        m.ground_truth_risk += weights_[k] * (clean_sum / n);
        for (double v : logits) cf = std::max(cf, std::abs(v));
      }
      const double observed = std::abs(m.ground_truth_risk - m.empirical_risk);
      report = make_bound_report(term_, omega_value(model, cf, omega), observed, spec_.bound_variant);
    }
    m.generalization_error = std::abs(m.ground_truth_risk - m.empirical_risk);
    m.bound_variant = std::string(to_string(report.variant));
    m.bound_value = report.bound;
    m.bound_holds = report.holds;
    check_invariants(m);
    write_metrics_row(csv_, label_, m);
    last_ = m;
  }

  std::string csv() const { return csv_.str(); }
  const RoundMetrics& last() const { return last_; }

 private:
  const ExperimentSpec& spec_;
  const SweepData& data_;
  const std::vector<LabeledDataset>* noisy_;
  const GridWorld* world_;
  RunLabel label_;
  std::vector<double> weights_;
  double term_ = 0.0;
  std::ostringstream csv_;
  RoundMetrics last_;
};

void run_cell(const ExperimentSpec& spec, const SweepData& data, const Seeds& seeds, const CellRecord& cell,
              const std::filesystem::path& root) {
  std::vector<LabeledDataset> shards;
  std::optional<GridWorld> world;
  if (spec.dataset == DatasetKind::gridworld) {
    world = cell_world(spec, cell.noise);
    for (std::size_t k = 0; k < spec.clients; ++k) {
      shards.push_back(grid_world_sample(*world, k, spec.samples_per_client, derive_seed(seeds.data, {k})));
    }
  } else {
    for (std::size_t k = 0; k < spec.clients; ++k) {
      shards.push_back(inject_label_noise(data.clean_shards[k], cell.noise[k], derive_seed(seeds.noise, {k})));
    }
  }

  FederationConfig config = spec.federation;
  config.strategy = cell.strategy;
  config.master_seed = seeds.train;
  Rng init_rng(derive_seed(seeds.init, {cell.architecture}));
  ReluMlp initial = ReluMlp::initialized(spec.architectures[cell.architecture], spec.hidden_bias_units, init_rng);

  CellRecorder recorder(spec, cell, data, world ? nullptr : &shards, world ? &*world : nullptr);
  const std::filesystem::path cell_dir = root / "cells";
  RoundLogger logger(cell_dir / (cell.run_id + ".log"),
                     spec.snapshot_every > 0 ? cell_dir / cell.run_id : std::filesystem::path{}, spec.snapshot_every);

  Federation federation(std::move(initial), shards, config);
  federation.run([&](const ServerState& server, std::span<const ClientState> clients, const RoundOutcome& outcome) {
    logger(server, clients, outcome);
    recorder.record(server, outcome);
  });
  save_snapshot(federation.server().global, cell_dir / (cell.run_id + ".rmlp"));
  write_file_atomic(root / cell.metrics, recorder.csv());
}

std::string manifest_text(const RunManifest& m) {
  std::ostringstream out;
  write_manifest(out, m);
  return out.str();
}

std::string summary_text(const RunManifest& m, const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "run_id,strategy,architecture";
  for (std::size_t k = 1; k <= spec.clients; ++k) out << ",wp_" << k;
  out << ",rounds,final_accuracy,final_L,final_L_dagger,final_G,final_pnp\n";
  for (const auto& cell : m.cells) {
    std::ifstream in(m.resolve(cell.metrics));
    const MetricsTable t = read_metrics_csv(in);
    if (t.rows.empty()) throw ParseError("sweep: " + cell.metrics.string() + " has no rows");
    const RoundMetrics& last = t.rows.back();
    out << cell.run_id << ',' << to_string(cell.strategy) << ',' << cell.architecture;
    for (double wp : cell.noise) out << ',' << format_double(wp);
    out << ',' << last.round << ',' << format_double(last.test_accuracy) << ','
        << format_double(last.empirical_risk) << ',' << format_double(last.ground_truth_risk) << ','
        << format_double(last.generalization_error) << ',' << format_double(last.path_norm) << '\n';
  }
  return out.str();
}

bool all_shared(const std::vector<CellRecord>& cells) {
  for (const auto& c : cells) {
    for (double wp : c.noise) {
      if (wp != c.noise.front()) return false;
    }
  }
  return true;
}

std::string regression_text(const RunManifest& m) {
  using nlohmann::json;
  const bool scalar = all_shared(m.cells);
  std::map<std::pair<std::string, std::size_t>, std::vector<AccuracyPoint>> groups;
  for (const auto& cell : m.cells) {
    std::ifstream in(m.resolve(cell.metrics));
    const MetricsTable t = read_metrics_csv(in);
    AccuracyPoint p;
    p.noise = scalar ? std::vector<double>{cell.noise.front()} : cell.noise;
    p.accuracy = t.rows.back().test_accuracy;
    groups[{std::string(to_string(cell.strategy)), cell.architecture}].push_back(std::move(p));
  }
  json fits = json::array();
  for (const auto& [key, points] : groups) {
    json entry;
    entry["strategy"] = key.first;
    entry["architecture"] = key.second;
    json predictors = json::array();
    if (scalar) {
      predictors.push_back("wp");
    } else {
      for (std::size_t k = 1; k <= m.clients; ++k) predictors.push_back("wp_" + std::to_string(k));
    }
    entry["predictors"] = predictors;
    entry["point_count"] = points.size();
    try {
      const RegressionFit fit = fit_accuracy_vs_noise(points);
      entry["coefficients"] = fit.coefficients;
      entry["r_squared"] = fit.r_squared;
    } catch (const DomainError& e) {
      entry["coefficients"] = nullptr;
      entry["r_squared"] = nullptr;
      entry["note"] = e.what();
    }
    fits.push_back(std::move(entry));
  }
  json doc;
  doc["fits"] = fits;
  return doc.dump(2) + "\n";
}

}  // namespace

LabeledDataset make_blobs(std::size_t dim, std::size_t classes, std::size_t n, double spread, std::uint64_t seed,
                          std::uint64_t stream) {
  if (dim == 0 || classes < 2 || n == 0) throw DomainError("blobs: need dim >= 1, classes >= 2, n >= 1");
  Rng center_rng(derive_seed(seed, {tag("centers")}));
  std::vector<double> centers(classes * dim);
  for (double& v : centers) v = center_rng.uniform(0.2, 0.8);
  Rng rng(derive_seed(seed, {tag("samples"), stream}));
  std::vector<double> features(n * dim);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = i % classes;
    labels[i] = static_cast<Label>(y);
    for (std::size_t d = 0; d < dim; ++d) {
      features[i * dim + d] = std::clamp(centers[y * dim + d] + spread * rng.normal(), 0.0, 1.0);
    }
  }
  return LabeledDataset(dim, std::move(features), std::move(labels), classes);
}

SweepData prepare_data(const ExperimentSpec& spec) {
  validate(spec);
  const Seeds seeds = derive_seeds(spec.seed);
  SweepData out;
  switch (spec.dataset) {
    case DatasetKind::gridworld:
      return out;
    case DatasetKind::idx: {
      LabeledDataset train = load_idx(spec.train_images, spec.train_labels, spec.train_limit);
      LabeledDataset test = load_idx(spec.test_images, spec.test_labels, spec.test_limit);
      check_fits(spec, train, "training");
      if (train.size() < spec.clients) throw ConfigError("spec: fewer training examples than clients");
      out.clean_shards = partition_iid(train, spec.clients, seeds.partition);
      out.test = std::move(test);
      return out;
    }
    case DatasetKind::blobs: {
      LabeledDataset train =
          make_blobs(spec.blob_dim, spec.blob_classes, spec.blob_train, spec.blob_spread, seeds.data, 0);
      out.test = make_blobs(spec.blob_dim, spec.blob_classes, spec.blob_test, spec.blob_spread, seeds.data, 1);
      out.clean_shards = partition_iid(train, spec.clients, seeds.partition);
      return out;
    }
  }
  return out;
}

GridWorld cell_world(const ExperimentSpec& spec, const std::vector<double>& noise) {
  return make_flip_world(spec.grid_side, noise, derive_seed(spec.seed, {tag("world")}));
}

RunManifest run_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
  validate(spec);
  const SweepData data = prepare_data(spec);
  const Seeds seeds = derive_seeds(spec.seed);
  const std::filesystem::path root = spec.output_dir;

  RunManifest manifest;
  manifest.name = spec.name;
  manifest.spec_hash = spec_hash(spec);
  manifest.version = FLNOISE_VERSION;
  manifest.master_seed = spec.seed;
  manifest.seeds = {{"partition", seeds.partition},
                    {"noise", seeds.noise},
                    {"init", seeds.init},
                    {"train", seeds.train},
                    {"data", seeds.data}};
  manifest.clients = spec.clients;
  manifest.rounds = spec.federation.rounds;
  manifest.architectures = spec.architectures;
  manifest.cells = enumerate_cells(spec);
  manifest.summary = "summary.csv";
  manifest.regression = "regression.json";
  manifest.root = root;

  const std::filesystem::path manifest_path = root / "manifest.txt";
  if (std::filesystem::exists(manifest_path)) {
    const RunManifest previous = read_manifest(manifest_path);
    if (previous.spec_hash != manifest.spec_hash) {
      throw ConfigError("sweep: " + root.string() + " holds a different experiment (spec hash " +
                        hex64(previous.spec_hash) + ")");
    }
    for (auto& cell : manifest.cells) {
      for (const auto& old : previous.cells) {
        if (old.run_id == cell.run_id && old.status == CellStatus::complete &&
            std::filesystem::exists(root / cell.metrics)) {
          cell.status = CellStatus::complete;
        }
      }
    }
  }
  std::filesystem::create_directories(root / "cells");
  write_file_atomic(root / "spec.txt", canonical_text(spec));
  write_file_atomic(manifest_path, manifest_text(manifest));

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < manifest.cells.size(); ++i) {
    if (manifest.cells[i].status != CellStatus::complete) todo.push_back(i);
  }

  std::mutex mu;
  std::ofstream events(root / "events.log", std::ios::app);
  auto note = [&](const std::string& line) {
    std::lock_guard lock(mu);
    events << line << '\n';
    events.flush();
    if (options.log) *options.log << line << std::endl;
  };
  note("sweep " + spec.name + ": " + std::to_string(todo.size()) + " of " + std::to_string(manifest.cells.size()) +
       " cells to run");

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  auto worker = [&] {
    while (!failed) {
      const std::size_t slot = next++;
      if (slot >= todo.size()) return;
      CellRecord& cell = manifest.cells[todo[slot]];
      try {
        note("cell " + cell.run_id + " start");
        run_cell(spec, data, seeds, cell, root);
        std::lock_guard lock(mu);
        cell.status = CellStatus::complete;
        write_file_atomic(manifest_path, manifest_text(manifest));
        events << "cell " << cell.run_id << " done\n";
        if (options.log) *options.log << "cell " << cell.run_id << " done" << std::endl;
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, todo.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  write_file_atomic(root / manifest.summary, summary_text(manifest, spec));
  write_file_atomic(root / manifest.regression, regression_text(manifest));
  note("sweep " + spec.name + ": complete");
  return manifest;
}

}  // namespace flnoise
