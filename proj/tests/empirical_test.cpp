#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "aol/empirical.hpp"

using namespace aol;

namespace {

Dataset xs_only(std::initializer_list<PointIndex> xs) {
  Dataset d;
  for (PointIndex x : xs) d.pairs.push_back({x, 0.0});
  return d;
}

double oracle_metric(const Predictor& f, const Predictor& g, const Dataset& s) {
  double total = 0;
  for (const LabeledPair& z : s.pairs) {
    const double diff = evaluate(f, z.x) - evaluate(g, z.x);
    total += diff * diff;
  }
  return std::sqrt(total / static_cast<double>(s.size()));
}

}  // namespace

TEST_CASE("emp_metric hand cases") {
  const Dataset s = xs_only({1, 2, 3, 4});
  const auto ctx = EmpiricalMetricContext::from_sample(s, 4);

  const Predictor zero = Predictor::member(FlatFunction::constant(4, 0.0));
  const Predictor one = Predictor::member(FlatFunction::constant(4, 1.0));
  const Predictor spike = Predictor::member(FlatFunction::from_dense({1.0, 0.0, 0.0, 0.0}));

  CHECK(emp_metric(zero, zero, ctx) == 0.0);
  CHECK(emp_metric(zero, one, ctx) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(emp_metric(zero, spike, ctx) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(emp_metric(spike, zero, ctx) == emp_metric(zero, spike, ctx));
}

TEST_CASE("emp_metric agrees with the definition on weighted samples") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const PointIndex support = 3 + static_cast<PointIndex>(rng.below(6));
    Dataset s;
    const std::size_t n = 5 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      s.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1), 0.0});
    }
    const auto ctx = EmpiricalMetricContext::from_sample(s, support);
    std::vector<double> va(support), vb(support);
    for (double& v : va) v = rng.next_unit();
    for (double& v : vb) v = rng.next_unit();
    const Predictor a = Predictor::member(FlatFunction::from_dense(va));
    const Predictor b = Predictor::member(FlatFunction::from_dense(vb));
    CHECK(emp_metric(a, b, ctx) == doctest::Approx(oracle_metric(a, b, s)).epsilon(1e-12));
  }
}

TEST_CASE("emp_risk hand cases") {
  Dataset d;
  d.pairs = {{1, 1.0}, {2, 0.0}, {3, 1.0}};
  const Predictor interp = Predictor::member(FlatFunction::from_dense({1.0, 0.0, 1.0}));
  CHECK(emp_risk(interp, d) == 0.0);

  Dataset ones;
  ones.pairs = {{1, 1.0}, {2, 1.0}};
  CHECK(emp_risk(Predictor::member(FlatFunction::constant(2, 0.0)), ones) == 1.0);

  Dataset half;
  half.pairs = {{1, 0.0}, {2, 1.0}};
  CHECK(emp_risk(Predictor::member(FlatFunction::constant(2, 0.5)), half) ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("emp_risk equals squared metric against an interpolating function") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const PointIndex support = 4 + static_cast<PointIndex>(rng.below(4));
    std::vector<double> labels(support);
    for (double& v : labels) v = rng.next_unit();
    Dataset d;
    for (PointIndex x = 1; x <= support; ++x) d.pairs.push_back({x, labels[x - 1]});

    std::vector<double> vals(support);
    for (double& v : vals) v = rng.next_unit();
    const Predictor f = Predictor::member(FlatFunction::from_dense(vals));
    const Predictor lab = Predictor::member(FlatFunction::from_dense(labels));
    const auto ctx = EmpiricalMetricContext::from_sample(d, support);
    const double metric = emp_metric(f, lab, ctx);
    CHECK(emp_risk(f, d) == doctest::Approx(metric * metric).epsilon(1e-12));
  }
}

TEST_CASE("emp_risk via label moments matches the pairwise loop") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const PointIndex support = 3 + static_cast<PointIndex>(rng.below(6));
    Dataset d;
    const std::size_t n = 4 + rng.below(50);
    for (std::size_t i = 0; i < n; ++i) {
      d.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1),
                         rng.bernoulli(0.5) ? 1.0 : 0.0});
    }
    std::vector<double> vals(support);
    for (double& v : vals) v = rng.next_unit();
    const Predictor f = Predictor::member(FlatFunction::from_dense(vals));
    const auto moments = LabelMoments::from_sample(d, support);
    CHECK(emp_risk(f, moments) == doctest::Approx(emp_risk(f, d)).epsilon(1e-12));
  }
}

TEST_CASE("greedy_cover hand cases") {
  const Dataset s = xs_only({1, 2, 3});
  const auto ctx = EmpiricalMetricContext::from_sample(s, 3);
  const std::vector<Predictor> constants = {
      Predictor::member(FlatFunction::constant(3, 0.0)),
      Predictor::member(FlatFunction::constant(3, 0.4)),
      Predictor::member(FlatFunction::constant(3, 1.0))};

  SUBCASE("single center once epsilon covers the diameter") {
    const EpsilonNet net = greedy_cover(constants, 1.0, ctx);
    REQUIRE(net.size() == 1);
    CHECK(net.center_ids[0] == 0);
  }
  SUBCASE("constants 0, 0.4, 1 at epsilon 0.5") {
    const EpsilonNet net = greedy_cover(constants, 0.5, ctx);
    REQUIRE(net.size() == 2);
    CHECK(net.center_ids[0] == 0);
    CHECK(net.center_ids[1] == 2);  // 0.4 is covered by the first center
  }
  SUBCASE("epsilon below every pairwise distance packs everything") {
    const EpsilonNet net = greedy_cover(constants, 0.1, ctx);
    CHECK(net.size() == 3);
  }
}

TEST_CASE("greedy_cover covering and separation over random classes") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const PointIndex support = 4 + static_cast<PointIndex>(rng.below(6));
    std::vector<Predictor> members;
    const std::size_t count = 5 + rng.below(20);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> vals(support);
      for (double& v : vals) v = rng.next_unit();
      members.push_back(Predictor::member(FlatFunction::from_dense(vals)));
    }
    Dataset s;
    for (int i = 0; i < 30; ++i) {
      s.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1), 0.0});
    }
    const auto ctx = EmpiricalMetricContext::from_sample(s, support);
    const double eps = rng.uniform(0.05, 0.7);
    const EpsilonNet net = greedy_cover(members, eps, ctx);

    for (const Predictor& m : members) {
      double best = 1e300;
      for (std::uint32_t c : net.center_ids) best = std::min(best, emp_metric(m, members[c], ctx));
      CHECK(best <= eps + 1e-12);
    }
    for (std::size_t a = 0; a < net.center_ids.size(); ++a) {
      for (std::size_t b = a + 1; b < net.center_ids.size(); ++b) {
        CHECK(emp_metric(members[net.center_ids[a]], members[net.center_ids[b]], ctx) > eps);
      }
    }
  }
}

TEST_CASE("rademacher_mc against exhaustive enumeration") {
  Rng rng(41);

  SUBCASE("singleton class is centered at zero") {
    const std::vector<std::vector<double>> values = {{0.3, 0.9, 0.1, 0.7}};
    auto est = rademacher_mc(values, 4000, rng);
    CHECK(std::abs(est.value - 0.0) <= 3 * est.stderr_ + 1e-12);
  }
  SUBCASE("plus-minus one constants, n = 2") {
    const std::vector<std::vector<double>> values = {{1, 1}, {-1, -1}};
    CHECK(rademacher_exact(values) == doctest::Approx(0.5).epsilon(1e-15));
    auto est = rademacher_mc(values, 4000, rng);
    CHECK(std::abs(est.value - 0.5) <= 3 * est.stderr_);
  }
  SUBCASE("plus-minus one constants, n = 1") {
    const std::vector<std::vector<double>> values = {{1}, {-1}};
    CHECK(rademacher_exact(values) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("member-list form matches the value-table form") {
    Dataset s;
    s.pairs = {{1, 0.0}, {2, 0.0}, {1, 0.0}};
    const std::vector<Predictor> members = {
        Predictor::member(FlatFunction::from_dense({0.2, 0.9})),
        Predictor::member(FlatFunction::from_dense({0.8, 0.1}))};
    const std::vector<std::vector<double>> table = {{0.2, 0.9, 0.2}, {0.8, 0.1, 0.8}};
    Rng a(7), b(7);
    CHECK(rademacher_mc(members, s, 500, a).value ==
          doctest::Approx(rademacher_mc(table, 500, b).value).epsilon(1e-15));
  }
  SUBCASE("random classes closed under negation, n <= 12") {
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 3 + rng.below(10);
      std::vector<std::vector<double>> values;
      const std::size_t rows = 2 + rng.below(4);
      for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> row(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
          row[i] = rng.uniform(-1, 1);
          neg[i] = -row[i];
        }
        values.push_back(row);
        values.push_back(neg);
      }
      const double exact = rademacher_exact(values);
      CHECK(exact >= 0.0);
      auto est = rademacher_mc(values, 3000, rng);
      CHECK(std::abs(est.value - exact) <= 3 * est.stderr_ + 1e-12);
    }
  }
}
