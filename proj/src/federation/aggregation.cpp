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

#include "flnoise/errors.hpp"
#include "flnoise/federation.hpp"

namespace flnoise {
namespace {

void check_shapes(std::size_t client_count, std::size_t global_size, auto size_of) {
  if (client_count == 0) throw ProtocolError("aggregate: no client updates");
  for (std::size_t k = 0; k < client_count; ++k) {
    if (size_of(k) != global_size) {
      throw ProtocolError("aggregate: update from client " + std::to_string(k) + " has " +
                          std::to_string(size_of(k)) + " parameters, global model has " +
                          std::to_string(global_size));
    }
  }
}

void check_global_lr(double lr) {
  if (!(lr >= 0.0 && lr <= 1.0)) throw DomainError("aggregate: global learning rate must lie in [0, 1]");
}

}  // namespace

void aggregate_fedavg(std::span<const ParamView> clients, std::span<double> global, double global_lr) {
  check_global_lr(global_lr);
  check_shapes(clients.size(), global.size(), [&](std::size_t k) { return clients[k].size(); });
  const auto n = static_cast<double>(clients.size());
  for (std::size_t i = 0; i < global.size(); ++i) {
    double sum = 0.0;
    for (const ParamView& w : clients) sum += w[i];
    // division keeps the mean of identical entries exact
    const double mean = sum / n;
    // (1 - lr) W + lr mean, written as W + lr (mean - W) so entries on which
    // all clients agree with W stay fixed; lr = 1 yields the mean bit for bit
    if (global_lr == 1.0) {
      global[i] = mean;
    } else if (global_lr != 0.0) {
      global[i] = global[i] + global_lr * (mean - global[i]);
    }
  }
}

void aggregate_scaffold(std::span<const ScaffoldClient> clients, std::span<double> global,
                        std::span<double> server_variate, double local_lr, double global_lr) {
  check_global_lr(global_lr);
  if (!(local_lr > 0.0)) throw DomainError("scaffold: local learning rate must be positive");
  check_shapes(clients.size(), global.size(), [&](std::size_t k) { return clients[k].params.size(); });
  if (server_variate.size() != global.size()) throw ProtocolError("scaffold: server control variate missing");
  for (std::size_t k = 0; k < clients.size(); ++k) {
    if (clients[k].control_variate.size() != global.size()) {
      throw ProtocolError("scaffold: control variate of client " + std::to_string(k) + " missing or misshaped");
    }
    if (clients[k].local_steps == 0) throw DomainError("scaffold: client reported zero local steps");
  }
  const auto n = static_cast<double>(clients.size());
  for (std::size_t i = 0; i < global.size(); ++i) {
    const double c = server_variate[i];
    double model_delta = 0.0;
    double variate_delta = 0.0;
    for (const ScaffoldClient& client : clients) {
      const double scale = 1.0 / (static_cast<double>(client.local_steps) * local_lr);
      const double old_ck = client.control_variate[i];
      const double new_ck = old_ck - c + (global[i] - client.params[i]) * scale;
      client.control_variate[i] = new_ck;
      variate_delta += new_ck - old_ck;
      model_delta += client.params[i] - global[i];
    }
    global[i] += global_lr * (model_delta / n);
    server_variate[i] = c + variate_delta / n;
  }
}

void aggregate_fednova(std::span<const ParamView> clients, std::span<const std::size_t> local_steps,
                       std::span<double> global, double global_lr) {
  check_global_lr(global_lr);
  check_shapes(clients.size(), global.size(), [&](std::size_t k) { return clients[k].size(); });
  if (local_steps.size() != clients.size()) throw ProtocolError("fednova: one step count per client required");
  double tau_sum = 0.0;
  for (std::size_t tau : local_steps) {
    if (tau == 0) throw DomainError("fednova: client reported zero local steps");
    tau_sum += static_cast<double>(tau);
  }
  const auto n = static_cast<double>(clients.size());
  const double tau_eff = tau_sum / n;
  for (std::size_t i = 0; i < global.size(); ++i) {
    double normalized = 0.0;
    for (std::size_t k = 0; k < clients.size(); ++k) {
      normalized += (global[i] - clients[k][i]) / static_cast<double>(local_steps[k]);
    }
    global[i] -= global_lr * tau_eff * (normalized / n);
  }
}

}  // namespace flnoise
