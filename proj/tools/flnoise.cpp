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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "flnoise/errors.hpp"
#include "flnoise/experiment_spec.hpp"
#include "flnoise/figures.hpp"
#include "flnoise/manifest.hpp"
#include "flnoise/relu_mlp.hpp"
#include "flnoise/snapshot.hpp"
#include "flnoise/sweep.hpp"
#include "flnoise/text.hpp"
#include "flnoise/verify.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kVerifyFailure = 4;

int run_command(const std::string& spec_path, std::optional<std::uint64_t> seed, const std::string& out,
                std::size_t threads, std::optional<std::size_t> limit) {
  flnoise::ExperimentSpec spec = flnoise::load_experiment_spec(spec_path);
  if (seed) spec.seed = *seed;
  if (!out.empty()) spec.output_dir = out;
  if (limit) spec.train_limit = *limit;
  flnoise::validate(spec);
  flnoise::SweepOptions options;
  options.threads = threads;
  options.log = &std::cerr;
  const flnoise::RunManifest manifest = flnoise::run_sweep(spec, options);
  std::cout << (manifest.root / "manifest.txt").string() << '\n';
  return 0;
}

int figure_command(const std::string& manifest_path, const std::string& figure, const std::string& out) {
  const flnoise::RunManifest manifest = flnoise::read_manifest(manifest_path);
  if (out.empty()) {
    flnoise::emit_figure_data(manifest, figure, std::cout);
    return 0;
  }
  std::ostringstream table;
  flnoise::emit_figure_data(manifest, figure, table);
  flnoise::write_file_atomic(out, table.str());
  return 0;
}

int verify_command(const std::string& manifest_path) {
  const flnoise::RunManifest manifest = flnoise::read_manifest(manifest_path);
  const flnoise::VerifyReport report = flnoise::verify_manifest(manifest);
  for (const auto& f : report.failures) std::cout << "FAIL " << f << '\n';
  std::cout << report.cells_checked << " cells, " << report.rows_checked << " rounds checked: "
            << (report.ok() ? "ok" : "FAILED") << '\n';
  return report.ok() ? 0 : kVerifyFailure;
}

int pathnorm_command(const std::string& snapshot_path) {
  const flnoise::ReluMlp model = flnoise::load_snapshot(snapshot_path);
  std::cout << flnoise::format_double(flnoise::path_norm_proxy(model)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated training under label noise: sweeps, figure tables and checks"};
  app.require_subcommand(1);

  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t threads = 1;
  std::optional<std::size_t> limit;
  auto* run = app.add_subcommand("run", "Run every cell of an experiment spec");
  run->add_option("spec", spec_path, "Experiment spec file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out, "Override the output directory");
  run->add_option("--threads", threads, "Cells trained concurrently")->check(CLI::PositiveNumber);
  run->add_option("--limit", limit, "Keep only the first N training examples");

  std::string manifest_path;
  std::string figure;
  std::string figure_out;
  auto* fig = app.add_subcommand("figure", "Write the plot table of one figure");
  fig->add_option("manifest", manifest_path, "manifest.txt of a finished sweep")->required();
  fig->add_option("figure", figure, "fig3a, fig3b, fig4, fig5, fig6, fig7 or fig8")->required();
  fig->add_option("--out", figure_out, "Write to this file instead of stdout");

  auto* ver = app.add_subcommand("verify", "Re-check the invariants of a finished sweep");
  ver->add_option("manifest", manifest_path, "manifest.txt of a finished sweep")->required();

  std::string snapshot_path;
  auto* pn = app.add_subcommand("pathnorm", "Print the path-norm proxy of a model snapshot");
  pn->add_option("snapshot", snapshot_path, "Snapshot file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return run_command(spec_path, seed, out, threads, limit);
    if (*fig) return figure_command(manifest_path, figure, figure_out);
    if (*ver) return verify_command(manifest_path);
    return pathnorm_command(snapshot_path);
  } catch (const flnoise::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const flnoise::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const flnoise::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
