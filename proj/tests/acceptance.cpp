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

// Runs the acceptance criteria and prints one PASS/FAIL line for each.
//
//   acceptance [output-dir] [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "flnoise/bound.hpp"
#include "flnoise/experiment_spec.hpp"
#include "flnoise/federation.hpp"
#include "flnoise/grid_world.hpp"
#include "flnoise/manifest.hpp"
#include "flnoise/noise.hpp"
#include "flnoise/idx.hpp"
#include "flnoise/regression.hpp"
#include "flnoise/risk.hpp"
#include "flnoise/round_metrics.hpp"
#include "flnoise/sweep.hpp"
#include "oracles.hpp"

using namespace flnoise;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path g_out;
const fs::path kMnist = FLNOISE_MNIST_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string mnist_keys() {
  return "dataset = idx\ntrain_images = " + (kMnist / "train-images-idx3-ubyte").string() +
         "\ntrain_labels = " + (kMnist / "train-labels-idx1-ubyte").string() +
         "\ntest_images = " + (kMnist / "t10k-images-idx3-ubyte").string() +
         "\ntest_labels = " + (kMnist / "t10k-labels-idx1-ubyte").string() + "\n";
}

/// Writes the spec file under g_out and loads it back, as the CLI would.
ExperimentSpec spec_file(const std::string& name, const std::string& body, const std::string& out_dir) {
  const fs::path path = g_out / (name + ".spec");
  std::ofstream(path) << "name = " << name << "\n" << body << "output_dir = " << out_dir << "\n";
  return load_experiment_spec(path);
}

ExperimentSpec spec8(const std::string& out) {
  return spec_file("trend",
                   mnist_keys() +
                       "train_limit = 8000\ntest_limit = 2000\nclients = 2\nnoise_levels = 0, 0.2, 0.4, 0.6, 0.8\n"
                       "strategies = fedavg\nrounds = 40\nseed = 8\n",
                   out);
}

ExperimentSpec spec9(const std::string& out) {
  return spec_file("slowdown",
                   mnist_keys() +
                       "train_limit = 8000\ntest_limit = 2000\nclients = 4\nnoise_mode = shared\n"
                       "noise_levels = 0, 0.1, 0.2, 0.4\nstrategies = fedavg\nrounds = 10\nseed = 9\n",
                   out);
}

ExperimentSpec spec10(const std::string& out) {
  return spec_file("growth",
                   mnist_keys() +
                       "train_limit = 2000\ntest_limit = 1000\nclients = 2\nnoise_levels = 0\nstrategies = fedavg\n"
                       "rounds = 40\nlayer_dims = 785,64,10; 785,64,32,10; 785,64,32,32,10\nseed = 10\n",
                   out);
}

SweepOptions sweep_options() {
  SweepOptions o;
  o.threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 4);
  return o;
}

MetricsTable cell_table(const RunManifest& m, const CellRecord& c) {
  std::ifstream in(m.resolve(c.metrics));
  return read_metrics_csv(in);
}

Outcome c1() {
  const auto [w1, w2] = fig2_worlds();
  const double w[] = {0.5, 0.5};
  const double e1 = std::abs(noise_expectation_term(w1, w) - 3.0 / 25.0);
  const double e2 = std::abs(noise_expectation_term(w2, w) - 4.0 / 25.0);
  return {e1 < 1e-12 && e2 < 1e-12, "errors " + fmt("%.3g", e1) + ", " + fmt("%.3g", e2)};
}

Outcome c2() {
  Rng rng(20260001);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto dims = oracle::random_dims(rng, 3, 4);
    const ReluMlp m = oracle::random_model(dims, false, rng, -2, 2);
    const double want = oracle::enumerate_path_norm(m);
    const double got = path_norm_proxy(m);
    const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
    worst = std::max(worst, rel);
  }
  return {worst < 1e-9, "200 nets, max relative error " + fmt("%.3g", worst)};
}

Outcome c3() {
  Rng rng(20260002);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto dims = oracle::random_dims(rng, 3, 4);
    const std::size_t classes = std::max<std::size_t>(2, dims.back());
    std::vector<std::size_t> d = dims;
    d.back() = classes;
    bool wide = true;
    for (std::size_t l = 1; l + 1 < d.size(); ++l) wide = wide && d[l] >= 2;
    const ReluMlp m = oracle::random_model(d, wide && t % 3 == 0, rng, -1, 1);
    const auto data = oracle::random_dataset(8, d.front() - 1, classes, rng);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < 8; ++i) {
      if (rng.below(2) == 0 || idx.empty()) idx.push_back(i);
    }
    const Gradient g = backward(m, data, idx);
    const Vector fd = oracle::finite_difference_gradient(m, data, idx, 1e-5);
    for (std::size_t i = 0; i < fd.size(); ++i) {
      const double scale = std::max({std::abs(g.values[i]), std::abs(fd[i]), 1e-5});
      worst = std::max(worst, std::abs(g.values[i] - fd[i]) / scale);
    }
  }
  return {worst < 1e-4, "50 nets, max relative error " + fmt("%.3g", worst)};
}

Outcome c4() {
  const double levels[] = {0.0, 0.12, 0.2, 0.4};
  std::vector<std::vector<double>> worlds;
  for (double a : levels) {
    for (double b : levels) worlds.push_back({a, b});
  }
  worlds.push_back({0.0, 0.12, 0.2, 0.4});
  std::size_t checks = 0;
  std::size_t held = 0;
  double worst_ratio = 0.0;
  for (std::size_t wi = 0; wi < worlds.size(); ++wi) {
    const GridWorld world = make_flip_world(5, worlds[wi], 4000 + wi);
    std::vector<LabeledDataset> shards;
    for (std::size_t k = 0; k < world.client_count(); ++k) {
      shards.push_back(grid_world_sample(world, k, 200, derive_seed(4100 + wi, {k})));
    }
    const std::vector<double> weights(world.client_count(), 1.0 / static_cast<double>(world.client_count()));
    Rng rng(4200 + wi);
    FederationConfig cfg;
    cfg.rounds = 40;
    cfg.master_seed = 4300 + wi;
    Federation fed(ReluMlp::initialized({3, 16, 2}, false, rng), shards, cfg);
    fed.run([&](const ServerState& server, std::span<const ClientState>, const RoundOutcome& outcome) {
      for (OmegaVariant v : {OmegaVariant::output_bound, OmegaVariant::path_norm}) {
        OmegaSpec spec{v, 1.0, outcome.round, cfg.local.epochs};
        const BoundReport r = theorem1_bound(server.global, world, weights, spec);
        const double g = generalization_error(server.global, world, weights);
        ++checks;
        if (g <= r.omega * r.expectation_term + 1e-9) ++held;
        if (r.bound > 0.0) worst_ratio = std::max(worst_ratio, g / r.bound);
      }
    });
  }
  return {held == checks, std::to_string(held) + "/" + std::to_string(checks) + " round checks hold, max G/bound " +
                              fmt("%.3g", worst_ratio)};
}

Outcome c5() {
  const auto [w1, w2] = fig2_worlds();
  Rng rng(20260005);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const ReluMlp m = oracle::random_model({3, 2 + rng.below(5), 2}, t % 2 == 1, rng, -3, 3);
    for (const GridWorld* w : {&w1, &w2}) {
      for (std::size_t k = 0; k < w->client_count(); ++k) {
        worst = std::max(worst, lemma1_identity_check(m, w->client_law(k)).difference);
        worst = std::max(worst, lemma1_identity_check(m, w->truth_law(k)).difference);
      }
    }
  }
  return {worst < 1e-9, "20 models, max difference " + fmt("%.3g", worst)};
}

LabeledDataset mnist_subset(std::size_t n) {
  return load_idx(kMnist / "train-images-idx3-ubyte", kMnist / "train-labels-idx1-ubyte", n);
}

bool same_bits(const ReluMlp& a, const ReluMlp& b) {
  const auto x = a.parameters();
  const auto y = b.parameters();
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

double max_abs_diff(const ReluMlp& a, const ReluMlp& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    worst = std::max(worst, std::abs(a.parameters()[i] - b.parameters()[i]));
  }
  return worst;
}

Outcome c6() {
  const LabeledDataset data = mnist_subset(600);
  Rng rng(20260006);
  const ReluMlp init = ReluMlp::initialized({785, 32, 10}, false, rng);
  FederationConfig cfg;
  cfg.rounds = 10;
  cfg.master_seed = 606;
  Federation fed(init, {data}, cfg);
  fed.run();
  ReluMlp central = init;
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    SgdConfig local = cfg.local;
    local.seed = client_seed(cfg.master_seed, 0, t);
    central = sgd_epochs(central, data, local).model;
  }
  const bool same = same_bits(fed.server().global, central);
  return {same, same ? "10 rounds, bitwise identical" : "max difference " + fmt("%.3g", max_abs_diff(fed.server().global, central))};
}

Outcome c7() {
  const LabeledDataset data = mnist_subset(800);
  std::vector<LabeledDataset> shards;
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = k * 200; i < (k + 1) * 200; ++i) idx.push_back(i);
    shards.push_back(data.subset(idx));
  }
  Rng rng(20260007);
  const ReluMlp init = ReluMlp::initialized({785, 32, 10}, false, rng);
  FederationConfig cfg;
  cfg.rounds = 5;
  cfg.master_seed = 707;
  cfg.strategy = StrategyKind::fedavg;
  Federation avg(init, shards, cfg);
  cfg.strategy = StrategyKind::fednova;
  Federation nova(init, shards, cfg);
  double nova_worst = 0.0;
  for (std::size_t t = 0; t < cfg.rounds; ++t) {
    avg.step();
    nova.step();
    nova_worst = std::max(nova_worst, max_abs_diff(avg.server().global, nova.server().global));
  }
  cfg.rounds = 1;
  cfg.strategy = StrategyKind::fedavg;
  Federation avg1(init, shards, cfg);
  avg1.step();
  cfg.strategy = StrategyKind::scaffold;
  Federation scaffold(init, shards, cfg);
  scaffold.step();
  const double scaffold_diff = max_abs_diff(avg1.server().global, scaffold.server().global);
  return {nova_worst <= 1e-12 && scaffold_diff <= 1e-12,
          "FedNova vs FedAvg " + fmt("%.3g", nova_worst) + " over 5 rounds, SCAFFOLD round 1 " +
              fmt("%.3g", scaffold_diff)};
}

Outcome c8() {
  const ExperimentSpec spec = spec8("trend");
  fs::remove_all(spec.output_dir);
  const RunManifest m = run_sweep(spec, sweep_options());
  std::vector<AccuracyPoint> points;
  for (const auto& c : m.cells) points.push_back({c.noise, cell_table(m, c).rows.back().test_accuracy});
  const RegressionFit fit = fit_accuracy_vs_noise(points);
  const bool pass = fit.coefficients[1] < 0 && fit.coefficients[2] < 0 && fit.r_squared >= 0.9;
  return {pass, "slopes " + fmt("%.4f", fit.coefficients[1]) + ", " + fmt("%.4f", fit.coefficients[2]) + ", R^2 " +
                    fmt("%.4f", fit.r_squared) + ", intercept " + fmt("%.4f", fit.coefficients[0])};
}

std::vector<double> round10_losses(const RunManifest& m) {
  std::vector<double> out;
  for (const auto& c : m.cells) {
    const MetricsTable t = cell_table(m, c);
    const auto& row = t.rows.at(9);
    double s = 0.0;
    for (double l : row.client_losses) s += l;
    out.push_back(s / static_cast<double>(row.client_losses.size()));
  }
  return out;
}

Outcome c9() {
  const ExperimentSpec spec = spec9("slowdown");
  fs::remove_all(spec.output_dir);
  const RunManifest m = run_sweep(spec, sweep_options());
  const std::vector<double> loss = round10_losses(m);
  std::size_t inversions = 0;
  std::string text;
  for (std::size_t i = 0; i < loss.size(); ++i) {
    if (i > 0 && loss[i] < loss[i - 1]) ++inversions;
    text += (i ? ", " : "") + fmt("%.4f", loss[i]);
  }
  return {inversions <= 1, "round-10 mean client loss by wp: " + text + " (" + std::to_string(inversions) +
                               " inversions)"};
}

Outcome c10() {
  const ExperimentSpec spec = spec10("growth");
  fs::remove_all(spec.output_dir);
  const RunManifest m = run_sweep(spec, sweep_options());
  bool monotone = true;
  std::string detail;
  std::optional<GrowthFit> three;
  for (const auto& c : m.cells) {
    const MetricsTable t = cell_table(m, c);
    std::size_t drops = 0;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      if (!(t.rows[i].path_norm > t.rows[i - 1].path_norm)) ++drops;
    }
    monotone = monotone && drops == 0;
    const std::size_t depth = m.architectures[c.architecture].size() - 1;
    detail += "depth " + std::to_string(depth) + " pnp " + fmt("%.3g", t.rows.front().path_norm) + "->" +
              fmt("%.3g", t.rows.back().path_norm) + " (" + std::to_string(drops) + " drops); ";
    if (depth == 3) {
      std::vector<GrowthPoint> pts;
      for (const auto& r : t.rows) {
        if (r.round >= 2) pts.push_back({static_cast<double>(r.round), r.path_norm});
      }
      three = fit_pathnorm_growth(pts);
    }
  }
  if (!three) return {false, "no depth-3 cell"};
  const double cap = static_cast<double>(spec.federation.local.epochs) * 2.0;  // E * hidden layers
  const bool pass = monotone && three->exponent > 0 && three->exponent <= cap && three->r_squared >= 0.8;
  return {pass, detail + "depth-3 exponent " + fmt("%.4f", three->exponent) + " (cap " + fmt("%g", cap) + "), R^2 " +
                    fmt("%.4f", three->r_squared)};
}

Outcome c11() {
  Rng rng(20260011);
  std::size_t cases = 0;
  bool ok = true;
  for (std::size_t n : {std::size_t{10}, std::size_t{999}, std::size_t{10000}}) {
    const LabeledDataset clean = oracle::random_dataset(n, 3, 10, rng);
    for (double wp : {0.0, 0.1, 0.5, 1.0}) {
      const LabeledDataset noisy = inject_label_noise(clean, wp, rng.next());
      std::size_t differ = 0;
      for (std::size_t i = 0; i < n; ++i) differ += noisy.label(i) != clean.label(i) ? 1 : 0;
      // Exactly round(wp * n) indices are selected, so a flip back to the
      // original label would leave fewer differences than that.
      const auto want = static_cast<std::size_t>(std::llround(wp * static_cast<double>(n)));
      ok = ok && differ == want && std::ranges::equal(noisy.features(), clean.features()) &&
           noisy.class_count() == clean.class_count();
      ++cases;
    }
  }
  return {ok, std::to_string(cases) + " (wp, n) cases"};
}

Outcome c12() {
  std::size_t compared = 0;
  std::vector<std::string> mismatches;
  auto compare_dirs = [&](const RunManifest& a, const fs::path& other) {
    for (const auto& c : a.cells) {
      ++compared;
      if (slurp(a.resolve(c.metrics)) != slurp(other / c.metrics)) mismatches.push_back(c.run_id);
    }
  };
  for (auto make : {&spec9, &spec10}) {
    const ExperimentSpec first = make(make == &spec9 ? "slowdown" : "growth");
    const RunManifest m = read_manifest(first.output_dir / "manifest.txt");
    const ExperimentSpec again = make(make == &spec9 ? "slowdown-rerun" : "growth-rerun");
    fs::remove_all(again.output_dir);
    run_sweep(again, sweep_options());
    compare_dirs(m, again.output_dir);
  }
  const ExperimentSpec trend = spec8("trend");
  const RunManifest m8 = read_manifest(trend.output_dir / "manifest.txt");
  const CellRecord& victim = m8.cells[m8.cells.size() / 2];
  const std::string before = slurp(m8.resolve(victim.metrics));
  fs::remove(m8.resolve(victim.metrics));
  run_sweep(trend, sweep_options());
  ++compared;
  if (slurp(m8.resolve(victim.metrics)) != before) mismatches.push_back(victim.run_id);
  std::string detail = std::to_string(compared) + " CSVs compared";
  for (const auto& id : mismatches) detail += ", differs: " + id;
  return {mismatches.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance-out");
  fs::create_directories(g_out);
  g_out = fs::absolute(g_out);
  std::vector<int> only;
  for (int i = 2; i < argc; ++i) only.push_back(std::stoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"noise expectation term on the worked example", c1},
      {"path-norm proxy vs path enumeration", c2},
      {"backprop vs central finite differences", c3},
      {"generalization bound on grid worlds, 40 FedAvg rounds", c4},
      {"class-conditional loss identity", c5},
      {"single-client FedAvg equals centralized SGD", c6},
      {"FedNova and SCAFFOLD reduce to FedAvg", c7},
      {"final accuracy falls linearly with client noise", c8},
      {"training loss slows with shared noise", c9},
      {"path-norm proxy grows polynomially", c10},
      {"label-noise injection contract", c11},
      {"end-to-end determinism", c12},
  };
  std::ofstream results(g_out / "results.txt");
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && std::ranges::find(only, number) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << criteria[i].first << " (" << o.detail
         << ") [" << fmt("%.1f", secs) << " s]";
    std::cout << line.str() << std::endl;
    results << line.str() << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
