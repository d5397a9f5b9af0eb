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
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "flnoise/labeled_dataset.hpp"
#include "flnoise/relu_mlp.hpp"
#include "flnoise/training.hpp"

namespace flnoise {

enum class StrategyKind { fedavg, scaffold, fednova };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

struct FederationConfig {
  std::size_t rounds = 40;
  double global_learning_rate = 1.0;
  /// Local training; `local.seed` is ignored, per-client seeds come from
  /// client_seed(master_seed, k, t).
  SgdConfig local{};
  StrategyKind strategy = StrategyKind::fedavg;
  std::uint64_t master_seed = 0;
  /// Worker threads for local training within a round.
  std::size_t client_threads = 1;
};

void validate(const FederationConfig& config);

/// Seed for client k's local training in round t.
std::uint64_t client_seed(std::uint64_t master_seed, std::size_t client, std::size_t round);

struct ClientState {
  std::size_t id = 0;
  LabeledDataset data;
  ReluMlp model;
  /// SCAFFOLD control variate c_k; empty for other strategies.
  Vector control_variate;
};

struct ServerState {
  ReluMlp global;
  /// SCAFFOLD server control variate c; empty for other strategies.
  Vector control_variate;
  std::size_t round = 0;
};

struct ClientUpdate {
  std::size_t client_id = 0;
  ReluMlp model;
  std::size_t local_steps = 0;
  double mean_loss = 0.0;
};

struct RoundOutcome {
  std::size_t round = 0;
  std::vector<double> client_losses;
  std::vector<std::size_t> local_steps;
  double wall_seconds = 0.0;
};

using ParamView = std::span<const double>;

/// (1 - lr) * W + lr * mean_k(w_k), in place on `global`.
void aggregate_fedavg(std::span<const ParamView> clients, std::span<double> global, double global_lr);

struct ScaffoldClient {
  ParamView params;
  std::span<double> control_variate;
  std::size_t local_steps = 0;
};

/// SCAFFOLD server step under full participation, in place:
///   c_k <- c_k - c + (W - w_k) / (K_k * local_lr)
///   W   <- W + global_lr * mean_k(w_k - W)
///   c   <- c + mean_k(delta c_k)
void aggregate_scaffold(std::span<const ScaffoldClient> clients, std::span<double> global,
                        std::span<double> server_variate, double local_lr, double global_lr);

/// FedNova normalized averaging, in place:
///   d_k = (W - w_k) / tau_k,  W <- W - global_lr * mean_k(tau_k) * mean_k(d_k)
void aggregate_fednova(std::span<const ParamView> clients, std::span<const std::size_t> local_steps,
                       std::span<double> global, double global_lr);

/// Server-side rule mapping client updates to a new global model.
class AggregationStrategy {
 public:
  virtual ~AggregationStrategy() = default;
  virtual StrategyKind kind() const = 0;

  /// Allocates strategy-private state on the server and every client.
  virtual void initialize(ServerState& server, std::span<ClientState> clients) const;

  /// Constant gradient correction for one client's local training; empty
  /// when the strategy trains with plain gradients.
  virtual Vector local_correction(const ClientState& client, const ServerState& server) const;

  virtual void aggregate(ServerState& server, std::span<ClientState> clients, std::span<const ClientUpdate> updates,
                         const FederationConfig& config) const = 0;
};

std::unique_ptr<AggregationStrategy> make_strategy(StrategyKind kind);

using RoundHook = std::function<void(const ServerState&, std::span<const ClientState>, const RoundOutcome&)>;

/// One communication round: every client trains E local epochs from the
/// broadcast model, the strategy aggregates the uploads in client-id order,
/// and the new global model is broadcast back. Throws ProtocolError when a
/// client does not hold the current global model at round start.
RoundOutcome run_round(ServerState& server, std::span<ClientState> clients, const AggregationStrategy& strategy,
                       const FederationConfig& config, const RoundHook& hook = {});

/// Owns the server, the clients and the strategy for a whole training run.
class Federation {
 public:
  Federation(ReluMlp initial, std::vector<LabeledDataset> shards, FederationConfig config);

  RoundOutcome step(const RoundHook& hook = {});
  /// Runs the remaining rounds up to config.rounds.
  std::vector<RoundOutcome> run(const RoundHook& hook = {});

  const ServerState& server() const { return server_; }
  std::span<const ClientState> clients() const { return clients_; }
  const FederationConfig& config() const { return config_; }

 private:
  FederationConfig config_;
  std::unique_ptr<AggregationStrategy> strategy_;
  ServerState server_;
  std::vector<ClientState> clients_;
};

}  // namespace flnoise
