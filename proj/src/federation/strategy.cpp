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

#include <string>
#include <vector>

#include "flnoise/errors.hpp"
#include "flnoise/federation.hpp"

namespace flnoise {
namespace {

std::vector<ParamView> upload_views(std::span<const ClientUpdate> updates) {
  std::vector<ParamView> views;
  views.reserve(updates.size());
  for (const ClientUpdate& u : updates) views.push_back(u.model.parameters());
  return views;
}

class FedAvg final : public AggregationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::fedavg; }

  void aggregate(ServerState& server, std::span<ClientState>, std::span<const ClientUpdate> updates,
                 const FederationConfig& config) const override {
    const auto views = upload_views(updates);
    aggregate_fedavg(views, server.global.parameters(), config.global_learning_rate);
  }
};

class Scaffold final : public AggregationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::scaffold; }

  void initialize(ServerState& server, std::span<ClientState> clients) const override {
    server.control_variate.assign(server.global.parameter_count(), 0.0);
    for (ClientState& c : clients) c.control_variate.assign(server.global.parameter_count(), 0.0);
  }

  // Local steps use grad - c_k + c.
  Vector local_correction(const ClientState& client, const ServerState& server) const override {
    const std::size_t p = server.global.parameter_count();
    if (server.control_variate.size() != p) throw ProtocolError("scaffold: server control variate missing");
    if (client.control_variate.size() != p) {
      throw ProtocolError("scaffold: control variate of client " + std::to_string(client.id) + " missing");
    }
    Vector correction(p);
    for (std::size_t i = 0; i < p; ++i) correction[i] = server.control_variate[i] - client.control_variate[i];
    return correction;
  }

  void aggregate(ServerState& server, std::span<ClientState> clients, std::span<const ClientUpdate> updates,
                 const FederationConfig& config) const override {
    std::vector<ScaffoldClient> inputs;
    inputs.reserve(updates.size());
    for (const ClientUpdate& u : updates) {
      if (u.client_id >= clients.size()) throw ProtocolError("scaffold: update from unknown client");
      inputs.push_back({u.model.parameters(), clients[u.client_id].control_variate, u.local_steps});
    }
    aggregate_scaffold(inputs, server.global.parameters(), server.control_variate, config.local.learning_rate,
                       config.global_learning_rate);
  }
};

class FedNova final : public AggregationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::fednova; }

  void aggregate(ServerState& server, std::span<ClientState>, std::span<const ClientUpdate> updates,
                 const FederationConfig& config) const override {
    const auto views = upload_views(updates);
    std::vector<std::size_t> steps;
    for (const ClientUpdate& u : updates) steps.push_back(u.local_steps);
    aggregate_fednova(views, steps, server.global.parameters(), config.global_learning_rate);
  }
};

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::fedavg:
      return "fedavg";
    case StrategyKind::scaffold:
      return "scaffold";
    case StrategyKind::fednova:
      return "fednova";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "fedavg") return StrategyKind::fedavg;
  if (name == "scaffold") return StrategyKind::scaffold;
  if (name == "fednova") return StrategyKind::fednova;
  throw DomainError("unknown aggregation strategy '" + std::string(name) + "'");
}

void AggregationStrategy::initialize(ServerState&, std::span<ClientState>) const {}

Vector AggregationStrategy::local_correction(const ClientState&, const ServerState&) const { return {}; }

std::unique_ptr<AggregationStrategy> make_strategy(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::fedavg:
      return std::make_unique<FedAvg>();
    case StrategyKind::scaffold:
      return std::make_unique<Scaffold>();
    case StrategyKind::fednova:
      return std::make_unique<FedNova>();
  }
  throw DomainError("unknown aggregation strategy");
}

}  // namespace flnoise
