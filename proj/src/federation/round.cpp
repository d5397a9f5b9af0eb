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

#include <chrono>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "flnoise/errors.hpp"
#include "flnoise/federation.hpp"

namespace flnoise {

void validate(const FederationConfig& config) {
  if (config.rounds == 0) throw DomainError("federation: at least one round required");
  if (!(config.global_learning_rate >= 0.0 && config.global_learning_rate <= 1.0)) {
    throw DomainError("federation: global learning rate must lie in [0, 1]");
  }
  if (config.client_threads == 0) throw DomainError("federation: client thread count must be positive");
  validate(config.local);
}

std::uint64_t client_seed(std::uint64_t master_seed, std::size_t client, std::size_t round) {
  return derive_seed(master_seed, {0x636c69656e74ULL, client, round});
}

RoundOutcome run_round(ServerState& server, std::span<ClientState> clients, const AggregationStrategy& strategy,
                       const FederationConfig& config, const RoundHook& hook) {
  validate(config);
  if (clients.empty()) throw ProtocolError("round: no clients");
  if (server.round >= config.rounds) throw ProtocolError("round: all configured rounds already ran");
  for (std::size_t k = 0; k < clients.size(); ++k) {
    if (clients[k].id != k) throw ProtocolError("round: clients must be ordered by id");
    if (!bitwise_equal(clients[k].model, server.global)) {
      throw ProtocolError("round: client " + std::to_string(k) + " does not hold the broadcast global model");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t t = server.round + 1;

  std::vector<std::optional<ClientUpdate>> slots(clients.size());
  auto train = [&](std::size_t k) {
    const Vector correction = strategy.local_correction(clients[k], server);
    SgdConfig local = config.local;
    local.seed = client_seed(config.master_seed, k, t);
    SgdResult r = sgd_epochs(clients[k].model, clients[k].data, local, correction);
    slots[k] = ClientUpdate{k, std::move(r.model), r.steps, r.mean_loss};
  };

  const std::size_t workers = std::min(config.client_threads, clients.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < clients.size(); ++k) train(k);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t k = w; k < clients.size(); k += workers) train(k);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<ClientUpdate> updates;
  updates.reserve(slots.size());
  for (auto& slot : slots) updates.push_back(std::move(*slot));
  strategy.aggregate(server, clients, updates, config);
  server.global.check_finite();
  for (ClientState& c : clients) c.model = server.global;
  server.round = t;

  RoundOutcome outcome;
  outcome.round = t;
  for (const ClientUpdate& u : updates) {
    outcome.client_losses.push_back(u.mean_loss);
    outcome.local_steps.push_back(u.local_steps);
  }
  outcome.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (hook) hook(server, clients, outcome);
  return outcome;
}

Federation::Federation(ReluMlp initial, std::vector<LabeledDataset> shards, FederationConfig config)
    : config_(config), strategy_(make_strategy(config.strategy)), server_{std::move(initial), {}, 0} {
  validate(config_);
  if (shards.empty()) throw DomainError("federation: no client shards");
  for (std::size_t k = 0; k < shards.size(); ++k) {
    clients_.push_back(ClientState{k, std::move(shards[k]), server_.global, {}});
  }
  strategy_->initialize(server_, clients_);
}

RoundOutcome Federation::step(const RoundHook& hook) { return run_round(server_, clients_, *strategy_, config_, hook); }

std::vector<RoundOutcome> Federation::run(const RoundHook& hook) {
  std::vector<RoundOutcome> out;
  while (server_.round < config_.rounds) out.push_back(step(hook));
  return out;
}

}  // namespace flnoise
