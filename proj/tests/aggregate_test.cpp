#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "aol/aggregate.hpp"

using namespace aol;

namespace {

Dataset const_labels(std::size_t n, double y) {
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) d.pairs.push_back({1, y});
  return d;
}

std::vector<Predictor> constants(std::initializer_list<double> values, PointIndex support) {
  std::vector<Predictor> out;
  for (double v : values) out.push_back(Predictor::member(FlatFunction::constant(support, v)));
  return out;
}

}  // namespace

TEST_CASE("segment_ls closed form") {
  const Predictor zero = Predictor::member(FlatFunction::constant(1, 0.0));
  const Predictor one = Predictor::member(FlatFunction::constant(1, 1.0));

  SUBCASE("labels at 0.3 give lambda 0.3, cross-checked by grid search") {
    const Dataset d = const_labels(12, 0.3);
    const double lambda = segment_ls(zero, one, d);
    CHECK(lambda == doctest::Approx(0.3).epsilon(1e-12));
    double best_risk = 1e300, best_l = -1;
    for (int k = 0; k <= 10000; ++k) {
      const double l = k * 1e-4;
      const Predictor mix = Predictor::mixture({zero, one}, {1 - l, l});
      const double r = emp_risk(mix, d);
      if (r < best_risk) {
        best_risk = r;
        best_l = l;
      }
    }
    CHECK(std::abs(lambda - best_l) <= 1e-4 + 1e-12);
  }
  SUBCASE("degenerate segment returns 0") {
    const Dataset d = const_labels(5, 0.8);
    CHECK(segment_ls(zero, zero, d) == 0.0);
  }
  SUBCASE("targets past the far endpoint clip to 1") {
    const Dataset d = const_labels(5, 1.0);
    const Predictor half = Predictor::member(FlatFunction::constant(1, 0.5));
    CHECK(segment_ls(zero, half, d) == 1.0);
  }
}

TEST_CASE("star_aggregate hand cases") {
  SUBCASE("single candidate is returned as-is") {
    const auto cands = constants({0.7}, 1);
    const Dataset d = const_labels(6, 0.2);
    CHECK(star_aggregate(cands, d) == cands[0]);
  }
  SUBCASE("two constants mix onto the label mean") {
    const auto cands = constants({0.0, 1.0}, 1);
    const Dataset d = const_labels(12, 0.3);
    const Predictor star = star_aggregate(cands, d);
    CHECK(evaluate(star, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(emp_risk(star, d) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("returns the erm when no segment improves") {
    // labels at 0: the erm is the constant 0 and every segment is decreasing
    // toward it
    const auto cands = constants({0.0, 0.6, 1.0}, 1);
    const Dataset d = const_labels(8, 0.0);
    CHECK(star_aggregate(cands, d) == cands[0]);
  }
}

TEST_CASE("star risk never exceeds the best candidate risk") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const PointIndex support = 3 + static_cast<PointIndex>(rng.below(5));
    std::vector<Predictor> cands;
    const std::size_t count = 2 + rng.below(10);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> vals(support);
      for (double& v : vals) v = rng.next_unit();
      cands.push_back(Predictor::member(FlatFunction::from_dense(vals)));
    }
    Dataset d;
    for (int i = 0; i < 20; ++i) {
      d.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1),
                         rng.bernoulli(0.4) ? 1.0 : 0.0});
    }
    const Predictor star = star_aggregate(cands, d);
    double min_risk = 1e300;
    for (const Predictor& c : cands) min_risk = std::min(min_risk, emp_risk(c, d));
    CHECK(emp_risk(star, d) <= min_risk);
  }
}

TEST_CASE("ew_aggregate weights") {
  SUBCASE("equal risks give uniform weights") {
    const auto cands = constants({0.2, 0.8}, 1);
    const Dataset d = const_labels(10, 0.5);
    const Predictor ew = ew_aggregate(cands, d, 4.0);
    REQUIRE(ew.weights().size() == 2);
    CHECK(ew.weights()[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("huge temperature concentrates on the minimizer") {
    const auto cands = constants({0.4, 0.9}, 1);
    const Dataset d = const_labels(10, 0.4);
    const Predictor ew = ew_aggregate(cands, d, 1e9);
    CHECK(ew.weights()[0] >= 1.0 - 1e-6);
  }
  SUBCASE("risk gap 1/n at beta 1 gives the logistic weight") {
    // risks r and r + 1/n: weights proportional to 1 : e^{-1}
    Dataset d;
    const std::size_t n = 16;
    for (std::size_t i = 0; i < n; ++i) d.pairs.push_back({1, 0.0});
    const double c2 = 1.0 / std::sqrt(static_cast<double>(n));  // risk gap c2^2 = 1/n
    const auto cands = constants({0.0, c2}, 1);
    const Predictor ew = ew_aggregate(cands, d, 1.0);
    CHECK(ew.weights()[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
  }
  SUBCASE("weights form a simplex vector") {
    const auto cands = constants({0.1, 0.5, 0.9}, 1);
    const Dataset d = const_labels(7, 0.3);
    const Predictor ew = ew_aggregate(cands, d, 4.0);
    double total = 0;
    for (double w : ew.weights()) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ew weights are invariant under a constant risk shift") {
  // balanced 0/1 labels and constant-1/2 labels have the same mean but a
  // label variance that shifts every candidate's empirical risk by exactly
  // 1/4; the soft-min weights must not move
  const auto cands = constants({0.1, 0.7, 0.4, 0.55}, 1);
  Dataset noisy, flat;
  for (int i = 0; i < 10; ++i) {
    noisy.pairs.push_back({1, i % 2 == 0 ? 0.0 : 1.0});
    flat.pairs.push_back({1, 0.5});
  }
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(emp_risk(cands[i], noisy) == doctest::Approx(emp_risk(cands[i], flat) + 0.25));
  }
  const Predictor ew_a = ew_aggregate(cands, noisy, 4.0);
  const Predictor ew_b = ew_aggregate(cands, flat, 4.0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(std::abs(ew_a.weights()[i] - ew_b.weights()[i]) <= 1e-10);
  }
}

TEST_CASE("ms_aggregate dispatches and validates") {
  const auto cands = constants({0.0, 1.0}, 1);
  const Dataset d = const_labels(10, 0.3);
  const Predictor star = ms_aggregate({AggregatorSpec::Kind::Star, 4.0}, cands, d);
  CHECK(evaluate(star, 1) == doctest::Approx(0.3).epsilon(1e-12));
  const Predictor ew = ms_aggregate({AggregatorSpec::Kind::ExpWeights, 4.0}, cands, d);
  CHECK(ew.is_mixture());
  CHECK_THROWS_AS(ms_aggregate({}, std::vector<Predictor>{}, d), std::invalid_argument);
}

TEST_CASE("star aggregation tracks the fast rate on a fixed dictionary") {
  // candidates fixed, fresh aggregation samples: the mean regret against the
  // best candidate decays like 1/n
  Rng rng(57);
  const PointIndex support = 6;
  std::vector<double> eta(support);
  for (double& e : eta) e = rng.uniform(0.3, 0.7);
  double eta_mean = 0;
  for (double e : eta) eta_mean += e / support;

  std::vector<Predictor> cands = {Predictor::member(FlatFunction::constant(support, eta_mean)),
                                  Predictor::member(FlatFunction::constant(support, 0.1)),
                                  Predictor::member(FlatFunction::constant(support, 0.45)),
                                  Predictor::member(FlatFunction::constant(support, 0.85))};
  auto pop_risk = [&](const Predictor& p) {
    double r = 0;
    for (PointIndex x = 1; x <= support; ++x) {
      const double v = evaluate(p, x);
      r += ((v - eta[x - 1]) * (v - eta[x - 1]) + eta[x - 1] * (1 - eta[x - 1])) / support;
    }
    return r;
  };
  double best = 1e300;
  for (const Predictor& c : cands) best = std::min(best, pop_risk(c));

  const std::size_t ns[] = {128, 512, 2048};
  std::vector<double> mean_excess;
  for (std::size_t n : ns) {
    double sum = 0;
    const int R = 400;
    for (int rep = 0; rep < R; ++rep) {
      Dataset d;
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = static_cast<PointIndex>(rng.below(support) + 1);
        d.pairs.push_back({x, rng.bernoulli(eta[x - 1]) ? 1.0 : 0.0});
      }
      sum += pop_risk(star_aggregate(cands, d)) - best;
    }
    mean_excess.push_back(sum / R);
  }
  // within a generous constant of log(N)/n, and roughly halving per octave
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(mean_excess[i] <= 8.0 * std::log(4.0) / static_cast<double>(ns[i]));
  }
  const double slope = std::log(mean_excess[2] / mean_excess[0]) / std::log(2048.0 / 128.0);
  CHECK(slope < -0.6);
  CHECK(slope > -1.4);
}
