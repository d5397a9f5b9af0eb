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

#include "flnoise/grid_world.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "flnoise/errors.hpp"
#include "flnoise/rng.hpp"
#include "flnoise/text.hpp"

namespace flnoise {
namespace {

constexpr double kProbabilityTolerance = 1e-12;

void check_distribution(std::span<const double> probs, const std::string& what) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(what + ": probability outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) throw DomainError(what + ": probabilities do not sum to 1");
}

void check_table(std::span<const double> table, std::size_t points, std::size_t classes, const std::string& what) {
  if (table.size() != points * classes) throw ShapeError(what + ": expected one row of class probabilities per point");
  for (std::size_t p = 0; p < points; ++p) {
    check_distribution(table.subspan(p * classes, classes), what + " at point " + std::to_string(p));
  }
}

// Swaps the conditional at point p onto the next class (for two classes, a
// plain swap of A and B).
void rotate_labels(std::vector<double>& table, std::size_t p, std::size_t classes) {
  std::vector<double> row(table.begin() + static_cast<std::ptrdiff_t>(p * classes),
                          table.begin() + static_cast<std::ptrdiff_t>((p + 1) * classes));
  for (std::size_t i = 0; i < classes; ++i) table[p * classes + (i + 1) % classes] = row[i];
}

struct SquareGrid {
  std::vector<double> points;
  std::vector<double> truth;
};

SquareGrid anti_diagonal_grid(std::size_t side) {
  SquareGrid g;
  const double step = side > 1 ? 1.0 / static_cast<double>(side - 1) : 0.0;
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      g.points.push_back(static_cast<double>(i) * step);
      g.points.push_back(static_cast<double>(j) * step);
      const bool class_a = i + j + 1 < side;
      g.truth.push_back(class_a ? 1.0 : 0.0);
      g.truth.push_back(class_a ? 0.0 : 1.0);
    }
  }
  return g;
}

std::vector<double> uniform_marginal(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

}  // namespace

GridWorld::GridWorld(std::size_t feature_dim, std::vector<double> points, std::size_t class_count,
                     std::vector<double> truth_conditional, std::vector<std::vector<double>> client_marginals,
                     std::vector<std::vector<double>> client_conditionals)
    : feature_dim_(feature_dim),
      points_(std::move(points)),
      class_count_(class_count),
      truth_(std::move(truth_conditional)),
      client_marginals_(std::move(client_marginals)),
      client_conditionals_(std::move(client_conditionals)) {
  if (feature_dim_ == 0 || points_.empty() || points_.size() % feature_dim_ != 0) {
    throw ShapeError("grid world: point table does not match feature dimension");
  }
  if (class_count_ == 0) throw DomainError("grid world: no classes");
  if (client_marginals_.empty()) throw DomainError("grid world: no clients");
  if (client_marginals_.size() != client_conditionals_.size()) {
    throw ShapeError("grid world: marginal and conditional tables disagree on client count");
  }
  for (double v : points_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("grid world: point coordinate outside [0, 1]");
  }
  const std::size_t n = point_count();
  check_table(truth_, n, class_count_, "grid world truth");
  for (std::size_t k = 0; k < client_count(); ++k) {
    const std::string who = "grid world client " + std::to_string(k);
    if (client_marginals_[k].size() != n) throw ShapeError(who + ": marginal length differs from point count");
    check_distribution(client_marginals_[k], who + " marginal");
    check_table(client_conditionals_[k], n, class_count_, who);
  }
}

GridWorld GridWorld::with_shared_marginal(std::size_t feature_dim, std::vector<double> points,
                                          std::size_t class_count, std::vector<double> marginal,
                                          std::vector<double> truth_conditional,
                                          std::vector<std::vector<double>> client_conditionals) {
  std::vector<std::vector<double>> marginals(client_conditionals.size(), marginal);
  return GridWorld(feature_dim, std::move(points), class_count, std::move(truth_conditional), std::move(marginals),
                   std::move(client_conditionals));
}

DiscreteLaw GridWorld::client_law(std::size_t client) const {
  return DiscreteLaw{points_, feature_dim_, client_marginals_.at(client), client_conditionals_.at(client),
                     class_count_};
}

DiscreteLaw GridWorld::truth_law(std::size_t client) const {
  return DiscreteLaw{points_, feature_dim_, client_marginals_.at(client), truth_, class_count_};
}

bool GridWorld::has_shared_marginal() const {
  for (const auto& m : client_marginals_) {
    if (m != client_marginals_.front()) return false;
  }
  return true;
}

std::size_t GridWorld::mismatched_points(std::size_t client) const {
  std::size_t count = 0;
  for (std::size_t p = 0; p < point_count(); ++p) {
    for (std::size_t i = 0; i < class_count_; ++i) {
      if (client_probability(client, p, i) != truth_probability(p, i)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::pair<GridWorld, GridWorld> fig2_worlds() {
  constexpr std::size_t side = 5;
  auto grid = anti_diagonal_grid(side);
  auto at = [](std::size_t i, std::size_t j) { return i * side + j; };

  // Three class-A points next to the class boundary carry label B at client 1.
  std::vector<double> client1 = grid.truth;
  for (std::size_t p : {at(0, 3), at(1, 2), at(2, 1)}) rotate_labels(client1, p, 2);
  const std::vector<double> client2_clean = grid.truth;
  // In the second world client 2 also mislabels one class-B point as A.
  std::vector<double> client2_noisy = grid.truth;
  rotate_labels(client2_noisy, at(3, 3), 2);

  const auto marginal = uniform_marginal(side * side);
  GridWorld first = GridWorld::with_shared_marginal(2, grid.points, 2, marginal, grid.truth, {client1, client2_clean});
  GridWorld second = GridWorld::with_shared_marginal(2, grid.points, 2, marginal, grid.truth, {client1, client2_noisy});
  return {std::move(first), std::move(second)};
}

GridWorld make_flip_world(std::size_t side, std::span<const double> flip_fractions, std::uint64_t seed) {
  if (side < 2) throw DomainError("grid world: side must be at least 2");
  if (flip_fractions.empty()) throw DomainError("grid world: no clients");
  auto grid = anti_diagonal_grid(side);
  const std::size_t n = side * side;
  std::vector<std::vector<double>> conditionals;
  for (std::size_t k = 0; k < flip_fractions.size(); ++k) {
    const double f = flip_fractions[k];
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("grid world: flip fraction outside [0, 1]");
    const auto flips = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, {k}));
    shuffle(std::span<std::size_t>(order), rng);
    std::vector<double> table = grid.truth;
    for (std::size_t i = 0; i < flips; ++i) rotate_labels(table, order[i], 2);
    conditionals.push_back(std::move(table));
  }
  return GridWorld::with_shared_marginal(2, std::move(grid.points), 2, uniform_marginal(n), std::move(grid.truth),
                                         std::move(conditionals));
}

LabeledDataset grid_world_sample(const GridWorld& world, std::size_t client, std::size_t n, std::uint64_t seed) {
  if (client >= world.client_count()) throw DomainError("grid world: client index out of range");
  if (n == 0) throw DomainError("grid world: sample size must be positive");
  const DiscreteLaw law = world.client_law(client);
  Rng rng(seed);

  auto draw = [&rng](auto&& probability, std::size_t count) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const double p = probability(i);
      if (p <= 0.0) continue;
      acc += p;
      last_positive = i;
      if (u < acc) return i;
    }
    // u landed in the rounding gap above the accumulated mass
    return last_positive;
  };

  std::vector<double> features;
  std::vector<Label> labels;
  features.reserve(n * law.feature_dim);
  labels.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t p = draw([&](std::size_t i) { return law.marginal[i]; }, law.point_count());
    const std::size_t y = draw([&](std::size_t i) { return law.probability(p, i); }, law.classes);
    auto x = law.point(p);
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(static_cast<Label>(y));
  }
  return LabeledDataset(law.feature_dim, std::move(features), std::move(labels), law.classes);
}

void write_grid_world(std::ostream& out, const GridWorld& world) {
  out << "gridworld 1\n"
      << "feature_dim " << world.feature_dim() << "\n"
      << "classes " << world.class_count() << "\n"
      << "clients " << world.client_count() << "\n"
      << "points " << world.point_count() << "\n";
  for (std::size_t p = 0; p < world.point_count(); ++p) {
    out << "point " << p;
    for (double v : world.point(p)) out << ' ' << format_double(v);
    out << '\n';
  }
  for (std::size_t p = 0; p < world.point_count(); ++p) {
    out << "truth " << p;
    for (std::size_t i = 0; i < world.class_count(); ++i) out << ' ' << format_double(world.truth_probability(p, i));
    out << '\n';
  }
  for (std::size_t k = 0; k < world.client_count(); ++k) {
    for (std::size_t p = 0; p < world.point_count(); ++p) {
      out << "client " << k << ' ' << p << ' ' << format_double(world.marginal(k, p));
      for (std::size_t i = 0; i < world.class_count(); ++i) {
        out << ' ' << format_double(world.client_probability(k, p, i));
      }
      out << '\n';
    }
  }
}

GridWorld read_grid_world(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_fields = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream ss(line);
      std::vector<std::string> fields;
      for (std::string f; ss >> f;) fields.push_back(f);
      if (!fields.empty()) return fields;
    }
    throw ParseError("grid world: unexpected end of input after line " + std::to_string(line_no));
  };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("grid world line " + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](const std::string& s) {
    auto v = parse_double(s);
    if (!v) throw fail("bad number '" + s + "'");
    return *v;
  };
  auto header = [&](const char* key) {
    auto f = next_fields();
    if (f.size() != 2 || f[0] != key) throw fail(std::string("expected '") + key + " <count>'");
    auto v = parse_unsigned(f[1]);
    if (!v) throw fail(std::string("bad ") + key);
    return static_cast<std::size_t>(*v);
  };

  if (header("gridworld") != 1) throw fail("unsupported version");
  const std::size_t dim = header("feature_dim");
  const std::size_t classes = header("classes");
  const std::size_t clients = header("clients");
  const std::size_t points = header("points");

  std::vector<double> coords(points * dim);
  std::vector<double> truth(points * classes);
  std::vector<std::vector<double>> marginals(clients, std::vector<double>(points));
  std::vector<std::vector<double>> conditionals(clients, std::vector<double>(points * classes));

  auto index = [&](const std::string& s, std::size_t bound, const char* what) {
    auto v = parse_unsigned(s);
    if (!v || *v >= bound) throw fail(std::string("bad ") + what + " index '" + s + "'");
    return static_cast<std::size_t>(*v);
  };
  for (std::size_t p = 0; p < points; ++p) {
    auto f = next_fields();
    if (f.size() != 2 + dim || f[0] != "point" || index(f[1], points, "point") != p) throw fail("expected point row");
    for (std::size_t d = 0; d < dim; ++d) coords[p * dim + d] = number(f[2 + d]);
  }
  for (std::size_t p = 0; p < points; ++p) {
    auto f = next_fields();
    if (f.size() != 2 + classes || f[0] != "truth" || index(f[1], points, "point") != p) throw fail("expected truth row");
    for (std::size_t i = 0; i < classes; ++i) truth[p * classes + i] = number(f[2 + i]);
  }
  for (std::size_t k = 0; k < clients; ++k) {
    for (std::size_t p = 0; p < points; ++p) {
      auto f = next_fields();
      if (f.size() != 4 + classes || f[0] != "client" || index(f[1], clients, "client") != k ||
          index(f[2], points, "point") != p) {
        throw fail("expected client row");
      }
      marginals[k][p] = number(f[3]);
      for (std::size_t i = 0; i < classes; ++i) conditionals[k][p * classes + i] = number(f[4 + i]);
    }
  }
  return GridWorld(dim, std::move(coords), classes, std::move(truth), std::move(marginals), std::move(conditionals));
}

}  // namespace flnoise
