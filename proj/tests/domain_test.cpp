#include <doctest.h>

#include <stdexcept>

#include <set>

#include "aol/domain.hpp"
#include "aol/rng.hpp"

using namespace aol;

namespace {

Dataset pairs_of(std::initializer_list<std::pair<PointIndex, double>> list) {
  Dataset d;
  for (const auto& [x, y] : list) d.pairs.push_back({x, y});
  return d;
}

}  // namespace

TEST_CASE("evaluate: member and mixtures") {
  const Predictor f = Predictor::member(FlatFunction::from_dense({0.1, 0.2, 0.4, 0.9}));
  CHECK(evaluate(f, 3) == 0.4);

  const Predictor zero = Predictor::member(FlatFunction::constant(4, 0.0));
  const Predictor one = Predictor::member(FlatFunction::constant(4, 1.0));
  const Predictor mix = Predictor::mixture({zero, one}, {0.7, 0.3});
  for (PointIndex x = 1; x <= 4; ++x) CHECK(evaluate(mix, x) == doctest::Approx(0.3).epsilon(1e-15));

  const Predictor single = Predictor::mixture({f}, {1.0});
  for (PointIndex x = 1; x <= 4; ++x) CHECK(evaluate(single, x) == evaluate(f, x));

  CHECK_THROWS_WITH_AS(evaluate(f, 5), "unknown design point", std::out_of_range);
  CHECK_THROWS_AS(evaluate(f, 0), std::out_of_range);
}

TEST_CASE("mixture weight validation") {
  const Predictor a = Predictor::member(FlatFunction::constant(2, 0.5));
  CHECK_THROWS_AS(Predictor::mixture({a, a}, {0.6, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Predictor::mixture({a, a}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Predictor::mixture({}, {}), std::invalid_argument);
}

TEST_CASE("split_threeway blocks in order") {
  const Dataset six = pairs_of({{1, 0}, {2, 1}, {3, 0}, {1, 1}, {2, 0}, {3, 1}});
  const ThreeWaySplit s = split_threeway(six);
  REQUIRE(s.s.size() == 2);
  REQUIRE(s.s_prime.size() == 2);
  REQUIRE(s.s_dprime.size() == 2);
  CHECK(s.s.pairs[0].x == 1);
  CHECK(s.s_prime.pairs[0].x == 3);
  CHECK(s.s_dprime.pairs[1].x == 3);

  const ThreeWaySplit t = split_threeway(pairs_of({{1, 0}, {2, 1}, {3, 0}}));
  CHECK(t.s.size() == 1);

  CHECK_THROWS_AS(
      split_threeway(pairs_of({{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}})),
      std::invalid_argument);
}

TEST_CASE("enumerate_members: finite list keeps order") {
  FiniteList fl;
  fl.members = {FlatFunction::constant(3, 0.2), FlatFunction::constant(3, 0.9),
                FlatFunction::constant(3, 0.5)};
  const auto out = enumerate_members(fl, 100);
  REQUIRE(out.size() == 3);
  CHECK(evaluate(out[0], 1) == 0.2);
  CHECK(evaluate(out[1], 1) == 0.9);
  CHECK(evaluate(out[2], 1) == 0.5);
}

TEST_CASE("enumerate_members: box grid p=2 J=1 step=1") {
  const BoxSequence box{2.0, 1, 1.0, 1};
  const auto out = enumerate_members(box, 100);
  // coordinate 1 ranges over {-1, 0, 1}, so f_1 over {0, 1/2, 1}
  REQUIRE(out.size() == 3);
  std::multiset<double> values;
  for (const auto& p : out) values.insert(evaluate(p, 1));
  CHECK(values == std::multiset<double>({0.0, 0.5, 1.0}));
}

TEST_CASE("enumerate_members: indicator supports") {
  const VcIndicator vc{0.75, 1, 3};
  const auto out = enumerate_members(vc, 100);
  REQUIRE(out.size() == 4);  // empty support plus three singletons
  CHECK(evaluate(out[0], 1) == 0.0);
  CHECK(evaluate(out[1], 1) == 0.75);
  CHECK(evaluate(out[1], 2) == 0.0);
  CHECK(evaluate(out[3], 3) == 0.75);
}

TEST_CASE("enumerate_members: budget errors carry the count") {
  const VcIndicator vc{0.75, 2, 10};  // 1 + 10 + 45 = 56 members
  CHECK(count_members(FunctionSpec{vc}) == 56);
  CHECK_THROWS_WITH_AS(enumerate_members(vc, 10),
                       "enumerate_members: class requires 56 members, budget is 10",
                       std::length_error);
  DictionaryHull hull;
  hull.dictionary = {FlatFunction::constant(2, 0.5)};
  hull.sparsity = 1;
  CHECK_THROWS_AS(enumerate_members(hull, 10), std::invalid_argument);
  CHECK(!count_members(FunctionSpec{hull}).has_value());
}

TEST_CASE("enumeration is deterministic and in range") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    FunctionSpec spec;
    switch (rng.below(3)) {
      case 0: {
        FiniteList fl;
        const PointIndex support = 2 + static_cast<PointIndex>(rng.below(4));
        const std::size_t count = 3 + rng.below(5);
        for (std::size_t i = 0; i < count; ++i) {
          std::vector<double> vals(support);
          for (double& v : vals) v = rng.next_unit();
          fl.members.push_back(FlatFunction::from_dense(vals));
        }
        spec = fl;
        break;
      }
      case 1:
        spec = BoxSequence{1.0 + rng.uniform(0, 2), 1 + static_cast<PointIndex>(rng.below(3)),
                           0.25 + rng.uniform(0, 0.5), 4};
        break;
      default:
        spec = VcIndicator{0.25 + rng.uniform(0, 0.75), 1 + static_cast<PointIndex>(rng.below(2)),
                           2 + static_cast<PointIndex>(rng.below(5))};
        break;
    }
    const auto a = enumerate_members(spec, 1u << 20);
    const auto b = enumerate_members(spec, 1u << 20);
    REQUIRE(a.size() == b.size());
    const PointIndex support = spec_support_size(spec);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == b[i]);
      for (PointIndex x = 1; x <= support; ++x) {
        const double v = evaluate(a[i], x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
}

TEST_CASE("mixture evaluation is linear in the weights") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const PointIndex support = 3 + static_cast<PointIndex>(rng.below(5));
    std::vector<Predictor> comps;
    for (int i = 0; i < 3; ++i) {
      std::vector<double> vals(support);
      for (double& v : vals) v = rng.next_unit();
      comps.push_back(Predictor::member(FlatFunction::from_dense(vals)));
    }
    auto simplex = [&rng] {
      std::vector<double> w = {rng.next_unit(), rng.next_unit(), rng.next_unit()};
      const double total = w[0] + w[1] + w[2];
      for (double& v : w) v /= total;
      return w;
    };
    const auto w1 = simplex();
    const auto w2 = simplex();
    std::vector<double> mid(3);
    for (int i = 0; i < 3; ++i) mid[i] = 0.5 * (w1[i] + w2[i]);
    const Predictor m1 = Predictor::mixture(comps, w1);
    const Predictor m2 = Predictor::mixture(comps, w2);
    const Predictor mm = Predictor::mixture(comps, mid);
    for (PointIndex x = 1; x <= support; ++x) {
      CHECK(evaluate(mm, x) ==
            doctest::Approx(0.5 * (evaluate(m1, x) + evaluate(m2, x))).epsilon(1e-12));
    }
  }
}
