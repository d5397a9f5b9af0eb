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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "flnoise/bound.hpp"
#include "flnoise/errors.hpp"
#include "flnoise/grid_world.hpp"
#include "flnoise/noise.hpp"
#include "flnoise/regression.hpp"
#include "flnoise/risk.hpp"
#include "flnoise/round_metrics.hpp"
#include "oracles.hpp"

using namespace flnoise;

namespace {

const std::vector<double> kHalf{0.5, 0.5};

ReluMlp constant_logits(std::size_t in, double a, double b) { return ReluMlp({in, 2}, {[&] {
  Vector w(2 * in, 0.0);
  w[in - 1] = a;
  w[2 * in - 1] = b;
  return w;
}()}); }

GridWorld clean_world() {
  const double none[] = {0.0, 0.0};
  return make_flip_world(5, none, 0);
}

}  // namespace

TEST_CASE("empirical risk basics") {
  Rng rng(1);
  const ReluMlp m = oracle::random_model({3, 4, 2}, false, rng, -1, 1);
  SUBCASE("one example is its own loss") {
    const LabeledDataset one(2, {0.3, 0.6}, {1}, 2);
    const std::vector<LabeledDataset> shards{one};
    const double w[] = {1.0};
    CHECK(empirical_risk(m, shards, w) == cross_entropy_loss(forward_features(m, one.feature(0)), 1, 2));
  }
  SUBCASE("constant logits give ln C on a grid world") {
    const auto [w1, w2] = fig2_worlds();
    CHECK(empirical_risk(ReluMlp({3, 2}), w1, kHalf) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ground_truth_risk(ReluMlp({3, 2}), w2, kHalf) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }
  SUBCASE("two identical clients equal one") {
    const GridWorld w = clean_world();
    const double single = expected_loss(m, w.client_law(0));
    CHECK(empirical_risk(m, w, kHalf) == doctest::Approx(single).epsilon(1e-15));
  }
  SUBCASE("weights must match and sum to one") {
    const GridWorld w = clean_world();
    const double bad[] = {0.5, 0.6};
    CHECK_THROWS_AS(empirical_risk(m, w, bad), DomainError);
    const double short_w[] = {1.0};
    CHECK_THROWS_AS(empirical_risk(m, w, short_w), DomainError);
  }
  SUBCASE("client weights") {
    const std::size_t sizes[] = {30, 10};
    CHECK(client_weights(sizes) == std::vector<double>{0.75, 0.25});
  }
}

TEST_CASE("ground-truth risk") {
  Rng rng(2);
  const ReluMlp m = oracle::random_model({3, 5, 2}, false, rng, -2, 2);
  const GridWorld clean = clean_world();
  CHECK(ground_truth_risk(m, clean, kHalf) == empirical_risk(m, clean, kHalf));
  CHECK(generalization_error(m, clean, kHalf) == 0.0);
  const auto [w1, w2] = fig2_worlds();
  CHECK(expected_loss(m, w1.truth_law(1)) == expected_loss(m, w1.client_law(1)));
}

TEST_CASE("enumerated ground-truth risk agrees with Monte Carlo") {
  Rng rng(3);
  const ReluMlp m = oracle::random_model({3, 6, 2}, false, rng, -2, 2);
  const auto [w1, w2] = fig2_worlds();
  // A world whose only client follows the ground truth.
  std::vector<double> pts, marg, truth;
  for (std::size_t p = 0; p < w1.point_count(); ++p) {
    pts.insert(pts.end(), w1.point(p).begin(), w1.point(p).end());
    marg.push_back(w1.marginal(0, p));
    for (std::size_t i = 0; i < 2; ++i) truth.push_back(w1.truth_probability(p, i));
  }
  const GridWorld truth_world = GridWorld::with_shared_marginal(2, pts, 2, marg, truth, {truth});
  const std::size_t n = 1000000;
  const auto sample = grid_world_sample(truth_world, 0, n, 11);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = cross_entropy_loss(forward_features(m, sample.feature(i)), sample.label(i), 2);
    sum += l;
    sum2 += l * l;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  const double exact = expected_loss(m, w1.truth_law(0));
  CHECK(std::abs(mean - exact) < 3 * se);
}

TEST_CASE("generalization error by hand enumeration") {
  // Two points with mass 1/2 each; the client swaps the label law at point 1.
  const GridWorld w = GridWorld::with_shared_marginal(1, {0.0, 1.0}, 2, {0.5, 0.5}, {1, 0, 0.3, 0.7},
                                                      {{1, 0, 0.7, 0.3}});
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const ReluMlp m = oracle::random_model({2, 3, 2}, false, rng, -2, 2);
    const double one[] = {1.0, 1.0};
    const Vector z = oracle::naive_logits(m, one);
    const double l0 = oracle::direct_cross_entropy(z, 0);
    const double l1 = oracle::direct_cross_entropy(z, 1);
    const double want = std::abs(0.5 * ((0.3 * l0 + 0.7 * l1) - (0.7 * l0 + 0.3 * l1)));
    const double weight[] = {1.0};
    CHECK(generalization_error(m, w, weight) == doctest::Approx(want).epsilon(1e-12));
    CHECK(generalization_error(m, w, weight) >= 0.0);
  }
}

TEST_CASE("noise expectation term of the example worlds") {
  const auto [w1, w2] = fig2_worlds();
  CHECK(std::abs(noise_expectation_term(w1, kHalf) - 3.0 / 25.0) < 1e-12);
  CHECK(std::abs(noise_expectation_term(w2, kHalf) - 4.0 / 25.0) < 1e-12);
  CHECK(noise_expectation_term(clean_world(), kHalf) == 0.0);
}

TEST_CASE("noise expectation term properties") {
  SUBCASE("symmetric in clients") {
    const double a[] = {0.12, 0.4};
    const double b[] = {0.4, 0.12};
    const double w[] = {0.5, 0.5};
    CHECK(noise_expectation_term(make_flip_world(5, a, 7), w) ==
          doctest::Approx(noise_expectation_term(make_flip_world(5, b, 7), w)).epsilon(1e-15));
  }
  SUBCASE("doubling the flipped points doubles the term") {
    const double a[] = {0.12, 0.0};
    const double b[] = {0.24, 0.0};
    CHECK(noise_expectation_term(make_flip_world(5, b, 1), kHalf) ==
          doctest::Approx(2 * noise_expectation_term(make_flip_world(5, a, 1), kHalf)).epsilon(1e-15));
  }
  SUBCASE("stays in [0, 2]") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> truth, client;
      for (int p = 0; p < 4; ++p) {
        double s = 0.0;
        std::vector<double> a(3), b(3);
        double sb = 0.0;
        for (int i = 0; i < 3; ++i) {
          a[i] = rng.uniform01();
          b[i] = rng.uniform01();
          s += a[i];
          sb += b[i];
        }
        for (int i = 0; i < 3; ++i) {
          truth.push_back(a[i] / s);
          client.push_back(b[i] / sb);
        }
      }
      const GridWorld w = GridWorld::with_shared_marginal(1, {0.0, 0.25, 0.5, 1.0}, 3, {0.25, 0.25, 0.25, 0.25},
                                                          truth, {client});
      const double one[] = {1.0};
      const double term = noise_expectation_term(w, one);
      CHECK(term >= 0.0);
      CHECK(term <= 2.0);
    }
  }
  SUBCASE("differing marginals are an assumption violation") {
    const GridWorld w(1, {0.0, 1.0}, 2, {1, 0, 0, 1}, {{0.5, 0.5}, {0.25, 0.75}}, {{1, 0, 0, 1}, {1, 0, 0, 1}});
    CHECK_THROWS_AS(noise_expectation_term(w, kHalf), AssumptionViolation);
    const BoundReport r = theorem1_bound(ReluMlp({2, 2}), w, kHalf, {});
    CHECK_FALSE(r.shared_marginal);
  }
}

TEST_CASE("bound on the example world") {
  const auto [w1, w2] = fig2_worlds();
  SUBCASE("clean system") {
    const BoundReport r = theorem1_bound(constant_logits(3, 1, -2), clean_world(), kHalf, {});
    CHECK(r.bound == 0.0);
    CHECK(r.observed_error == 0.0);
    CHECK(r.holds);
  }
  SUBCASE("measured output bound of 5") {
    const BoundReport r = theorem1_bound(constant_logits(3, 5, -5), w1, kHalf, {});
    CHECK(r.omega == 5.0);
    CHECK(r.expectation_term == doctest::Approx(3.0 / 25.0).epsilon(1e-15));
    CHECK(r.bound == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(r.holds);
    CHECK(r.shared_marginal);
  }
  SUBCASE("omega variants") {
    const ReluMlp m = constant_logits(3, 5, -5);
    OmegaSpec spec;
    spec.variant = OmegaVariant::path_norm;
    CHECK(theorem1_bound(m, w1, kHalf, spec).omega == 10.0);
    spec.variant = OmegaVariant::polynomial;
    spec.c0 = 2.0;
    spec.round = 3;
    spec.local_epochs = 5;
    Rng rng(6);
    const ReluMlp deep = oracle::random_model({3, 4, 4, 2}, false, rng, -1, 1);
    CHECK(theorem1_bound(deep, w1, kHalf, spec).omega == doctest::Approx(2.0 * std::pow(3.0, 10.0)));
    CHECK(parse_omega_variant(to_string(OmegaVariant::polynomial)) == OmegaVariant::polynomial);
    CHECK_THROWS_AS(parse_omega_variant("spectral"), DomainError);
  }
}

TEST_CASE("bound holds for random models on flip worlds") {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const double f[] = {rng.uniform01() * 0.5, rng.uniform01() * 0.5, rng.uniform01() * 0.5};
    const GridWorld w = make_flip_world(5, f, rng.next());
    const double weights[] = {0.2, 0.3, 0.5};
    const ReluMlp m = oracle::random_model({3, 4, 3, 2}, t % 2 == 0, rng, -3, 3);
    for (OmegaVariant v : {OmegaVariant::output_bound, OmegaVariant::path_norm}) {
      OmegaSpec spec;
      spec.variant = v;
      const BoundReport r = theorem1_bound(m, w, weights, spec);
      CHECK(r.holds);
      CHECK(r.observed_error == doctest::Approx(generalization_error(m, w, weights)).epsilon(1e-15));
    }
    CHECK(theorem1_bound(m, w, weights, {OmegaVariant::path_norm}).omega >=
          theorem1_bound(m, w, weights, {}).omega);
  }
}

TEST_CASE("bound on finite client datasets") {
  Rng rng(8);
  const auto clean_a = oracle::random_dataset(50, 2, 3, rng);
  const auto clean_b = oracle::random_dataset(30, 2, 3, rng);
  const std::vector<LabeledDataset> clean{clean_a, clean_b};
  const std::vector<LabeledDataset> noisy{inject_label_noise(clean_a, 0.2, 1), inject_label_noise(clean_b, 0.5, 2)};
  const auto w = client_weights(std::span<const LabeledDataset>(clean));
  for (int t = 0; t < 20; ++t) {
    const ReluMlp m = oracle::random_model({3, 5, 3}, false, rng, -2, 2);
    const BoundReport r = theorem1_bound(m, noisy, clean, w, {});
    CHECK(r.expectation_term == doctest::Approx(w[0] * 2 * 0.2 + w[1] * 2 * 0.5).epsilon(1e-15));
    CHECK(r.holds);
    CHECK(r.observed_error ==
          doctest::Approx(std::abs(empirical_risk(m, clean, w) - empirical_risk(m, noisy, w))).epsilon(1e-15));
  }
  const std::vector<LabeledDataset> mismatched{clean_b, clean_a};
  CHECK_THROWS_AS(theorem1_bound(ReluMlp({3, 3}), mismatched, clean, w, {}), ShapeError);
}

TEST_CASE("class-conditional expansion of the expected loss") {
  const auto [w1, w2] = fig2_worlds();
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const ReluMlp m = oracle::random_model({3, 5, 2}, t % 2 == 0, rng, -3, 3);
    for (const GridWorld* w : {&w1, &w2}) {
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(lemma1_identity_check(m, w->client_law(k)).difference < 1e-9);
        CHECK(lemma1_identity_check(m, w->truth_law(k)).difference < 1e-9);
      }
    }
  }
  const IdentityCheck c = lemma1_identity_check(ReluMlp({3, 2}), w1.client_law(0));
  CHECK(c.direct == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(c.expanded == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // Every point labelled class 1: class 0 has no mass and is skipped.
  const GridWorld single = GridWorld::with_shared_marginal(1, {0.0, 1.0}, 2, {0.5, 0.5}, {0, 1, 0, 1}, {{0, 1, 0, 1}});
  const ReluMlp m = oracle::random_model({2, 3, 2}, false, rng, -1, 1);
  const IdentityCheck s = lemma1_identity_check(m, single.client_law(0));
  CHECK(s.direct == doctest::Approx(expected_loss(m, single.client_law(0))).epsilon(1e-15));
  CHECK(s.expanded == doctest::Approx(s.direct).epsilon(1e-14));
}

TEST_CASE("linear regression") {
  SUBCASE("exact plane") {
    std::vector<AccuracyPoint> pts;
    for (double a : {0.0, 0.2, 0.4, 0.6}) {
      for (double b : {0.0, 0.3, 0.9}) pts.push_back({{a, b}, 0.9 - 0.25 * a - 0.4 * b});
    }
    const RegressionFit fit = fit_accuracy_vs_noise(pts);
    CHECK(fit.point_count() == 12);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fit.coefficients[0] - 0.9) < 1e-9);
    CHECK(std::abs(fit.coefficients[1] + 0.25) < 1e-9);
    CHECK(std::abs(fit.coefficients[2] + 0.4) < 1e-9);
  }
  SUBCASE("constant responses") {
    std::vector<AccuracyPoint> pts{{{0.0, 0.1}, 0.8}, {{0.5, 0.2}, 0.8}, {{0.1, 0.9}, 0.8}, {{0.7, 0.7}, 0.8}};
    const RegressionFit fit = fit_accuracy_vs_noise(pts);
    CHECK(fit.r_squared == 0.0);
    CHECK(std::abs(fit.coefficients[1]) < 1e-15);
    CHECK(std::abs(fit.coefficients[2]) < 1e-15);
    CHECK(fit.coefficients[0] == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("noisy data keeps R^2 in [0, 1]") {
    Rng rng(10);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) {
      x.push_back({rng.uniform01(), rng.uniform01()});
      y.push_back(rng.normal());
    }
    const RegressionFit fit = fit_linear(x, y);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
  }
  SUBCASE("degenerate inputs") {
    std::vector<AccuracyPoint> few{{{0.0, 0.1}, 0.8}, {{0.5, 0.2}, 0.7}, {{0.1, 0.9}, 0.6}};
    CHECK_THROWS_AS(fit_accuracy_vs_noise(few), DomainError);
    std::vector<AccuracyPoint> collinear{{{0.0, 0.0}, 0.8}, {{0.5, 0.5}, 0.7}, {{0.1, 0.1}, 0.6}, {{0.2, 0.2}, 0.5}};
    CHECK_THROWS_AS(fit_accuracy_vs_noise(collinear), DomainError);
  }
}

TEST_CASE("path-norm growth fit") {
  std::vector<GrowthPoint> power;
  for (int t = 1; t <= 10; ++t) power.push_back({double(t), 7.0 * t * t * t});
  const GrowthFit g = fit_pathnorm_growth(power);
  CHECK(g.exponent == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.offset == doctest::Approx(std::log(7.0)).epsilon(1e-12));
  CHECK(g.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<GrowthPoint> flat{{1, 2.5}, {2, 2.5}, {5, 2.5}};
  CHECK(fit_pathnorm_growth(flat).exponent == 0.0);
  CHECK(fit_pathnorm_growth(flat).r_squared == 0.0);

  std::vector<GrowthPoint> two{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(fit_pathnorm_growth(two), DomainError);
  std::vector<GrowthPoint> early{{0.5, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(fit_pathnorm_growth(early), DomainError);
  std::vector<GrowthPoint> zero{{1, 0}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(fit_pathnorm_growth(zero), DomainError);
}

TEST_CASE("round metrics CSV") {
  RoundMetrics m;
  m.round = 3;
  m.client_losses = {0.5, 0.25};
  m.test_accuracy = 0.875;
  m.empirical_risk = 0.4;
  m.ground_truth_risk = 0.1;
  m.generalization_error = std::abs(0.1 - 0.4);
  m.path_norm = 12.5;
  m.bound_variant = "path_norm";
  m.bound_value = 1.5;
  m.bound_holds = true;
  CHECK_NOTHROW(check_invariants(m));
  const RunLabel label{"c0001-fedavg-a0", "fedavg", {0.2, 0.4}};
  std::stringstream ss;
  write_metrics_header(ss, 2);
  write_metrics_row(ss, label, m);
  RoundMetrics bare = m;
  bare.round = 4;
  bare.bound_variant.clear();
  bare.bound_value.reset();
  bare.bound_holds.reset();
  write_metrics_row(ss, label, bare);
  const std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "run_id,strategy,wp_1,wp_2,round,loss_1,loss_2,test_accuracy,L,L_dagger,G,pnp,bound_variant,bound_value,"
        "bound_holds");
  const MetricsTable t = read_metrics_csv(ss);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.label.noise == label.noise);
  CHECK(t.rows[0].generalization_error == m.generalization_error);
  CHECK(t.rows[0].bound_holds == true);
  CHECK_FALSE(t.rows[1].bound_value.has_value());

  RoundMetrics broken = m;
  broken.generalization_error = 0.31;
  CHECK_THROWS_AS(check_invariants(broken), DomainError);
  broken = m;
  broken.test_accuracy = 1.01;
  CHECK_THROWS_AS(check_invariants(broken), DomainError);
  std::stringstream junk("nope\n");
  CHECK_THROWS_AS(read_metrics_csv(junk), ParseError);
}

TEST_CASE("expected accuracy is a probability") {
  Rng rng(11);
  const auto [w1, w2] = fig2_worlds();
  const double uniform[] = {0.0, 0.0};
  const GridWorld clean = make_flip_world(5, uniform, 3);
  for (int t = 0; t < 200; ++t) {
    const ReluMlp m = oracle::random_model({3, 4, 2}, false, rng, -2, 2);
    for (const GridWorld* w : {&w1, &w2, &clean}) {
      const double a = expected_accuracy(m, *w);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
    }
  }
  // A model that always predicts the true class is right with probability 1.
  const ReluMlp perfect({3, 2}, {Vector{-1, -1, 0.875, 0, 0, 0}});
  CHECK(expected_accuracy(perfect, clean) == doctest::Approx(1.0).epsilon(1e-15));
}
