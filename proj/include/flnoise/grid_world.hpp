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
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "flnoise/labeled_dataset.hpp"

namespace flnoise {

/// Non-owning view of a distribution on finitely many feature points:
/// a marginal over points and a label table Pr(Y = i | x).
struct DiscreteLaw {
  std::span<const double> points;  // point_count x feature_dim, row-major
  std::size_t feature_dim = 0;
  std::span<const double> marginal;
  std::span<const double> conditional;  // point_count x classes, row-major
  std::size_t classes = 0;

  std::size_t point_count() const { return marginal.size(); }
  std::span<const double> point(std::size_t p) const { return points.subspan(p * feature_dim, feature_dim); }
  double probability(std::size_t p, std::size_t label) const { return conditional[p * classes + label]; }
};

/// Finite feature space with exact per-client label laws pi_k and one ground
/// truth mu. Each client carries its own feature marginal so that a violated
/// shared-marginal condition can be represented and detected; the factories
/// in this header always build shared marginals.
class GridWorld {
 public:
  GridWorld(std::size_t feature_dim, std::vector<double> points, std::size_t class_count,
            std::vector<double> truth_conditional, std::vector<std::vector<double>> client_marginals,
            std::vector<std::vector<double>> client_conditionals);

  /// All clients share `marginal`.
  static GridWorld with_shared_marginal(std::size_t feature_dim, std::vector<double> points, std::size_t class_count,
                                        std::vector<double> marginal, std::vector<double> truth_conditional,
                                        std::vector<std::vector<double>> client_conditionals);

  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t point_count() const { return points_.size() / feature_dim_; }
  std::size_t class_count() const { return class_count_; }
  std::size_t client_count() const { return client_marginals_.size(); }

  std::span<const double> point(std::size_t p) const {
    return std::span<const double>(points_).subspan(p * feature_dim_, feature_dim_);
  }
  double marginal(std::size_t client, std::size_t p) const { return client_marginals_[client][p]; }
  double client_probability(std::size_t client, std::size_t p, std::size_t label) const {
    return client_conditionals_[client][p * class_count_ + label];
  }
  double truth_probability(std::size_t p, std::size_t label) const { return truth_[p * class_count_ + label]; }

  DiscreteLaw client_law(std::size_t client) const;
  /// Ground truth labels under client `client`'s feature marginal.
  DiscreteLaw truth_law(std::size_t client) const;

  /// True when every client has bitwise the same feature marginal.
  bool has_shared_marginal() const;

  /// Points where client `client`'s label law differs from the ground truth.
  std::size_t mismatched_points(std::size_t client) const;

  bool operator==(const GridWorld&) const = default;

 private:
  std::size_t feature_dim_;
  std::vector<double> points_;
  std::size_t class_count_;
  std::vector<double> truth_;
  std::vector<std::vector<double>> client_marginals_;
  std::vector<std::vector<double>> client_conditionals_;
};

/// The two-client, two-class example worlds on a 5x5 grid with a uniform
/// feature marginal. First: client 1 mislabels three class-A points as B and
/// client 2 is clean. Second: additionally client 2 mislabels one point.
std::pair<GridWorld, GridWorld> fig2_worlds();

/// A side x side grid in [0, 1]^2 with two classes split along the
/// anti-diagonal (class 0 where i + j < side - 1). Client k swaps the labels
/// of round(flip_fractions[k] * side^2) points picked by a permutation seeded
/// from derive_seed(seed, {k}).
GridWorld make_flip_world(std::size_t side, std::span<const double> flip_fractions, std::uint64_t seed);

/// n i.i.d. draws from client `client`: feature from its marginal, then the
/// label from its conditional at that feature.
LabeledDataset grid_world_sample(const GridWorld& world, std::size_t client, std::size_t n, std::uint64_t seed);

/// Text table: a header, one `point` line per grid point, one `truth` line per
/// point and one `client` line per (client, point) carrying the marginal and
/// the conditional. Values are written in shortest round-trip form.
void write_grid_world(std::ostream& out, const GridWorld& world);
GridWorld read_grid_world(std::istream& in);

}  // namespace flnoise
