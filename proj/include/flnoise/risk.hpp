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
#include <span>
#include <vector>

#include "flnoise/grid_world.hpp"
#include "flnoise/labeled_dataset.hpp"
#include "flnoise/relu_mlp.hpp"

namespace flnoise {

/// n_k / n for shard sizes n_k.
std::vector<double> client_weights(std::span<const std::size_t> shard_sizes);
std::vector<double> client_weights(std::span<const LabeledDataset> shards);

/// E_law[ loss(f(X), Y) ] by enumeration over (point, class).
double expected_loss(const ReluMlp& model, const DiscreteLaw& law);

/// Mean cross-entropy over a dataset.
double mean_loss(const ReluMlp& model, const LabeledDataset& data);

/// L(W) = sum_k w_k E_{pi_k}[loss], exact on a grid world.
double empirical_risk(const ReluMlp& model, const GridWorld& world, std::span<const double> weights);

/// L(W) on finite client datasets: sum_k w_k * mean loss on shard k.
double empirical_risk(const ReluMlp& model, std::span<const LabeledDataset> shards, std::span<const double> weights);

/// L_dagger(W) = sum_k w_k E_{mu}[loss] with client k's feature marginal.
double ground_truth_risk(const ReluMlp& model, const GridWorld& world, std::span<const double> weights);

/// G(W) = |L_dagger(W) - L(W)|.
double generalization_error(const ReluMlp& model, const GridWorld& world, std::span<const double> weights);

/// Fraction of examples whose arg-max logit equals the label.
double accuracy(const ReluMlp& model, const LabeledDataset& data);

/// Probability that the arg-max prediction matches a ground-truth label,
/// under client 0's feature marginal.
double expected_accuracy(const ReluMlp& model, const GridWorld& world);

}  // namespace flnoise
