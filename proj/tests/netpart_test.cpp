#include <doctest.h>

#include <stdexcept>

#include "aol/netpart.hpp"

using namespace aol;

namespace {

Dataset xs_only(std::initializer_list<PointIndex> xs) {
  Dataset d;
  for (PointIndex x : xs) d.pairs.push_back({x, 0.0});
  return d;
}

std::vector<Predictor> constants(std::initializer_list<double> values, PointIndex support) {
  std::vector<Predictor> out;
  for (double v : values) out.push_back(Predictor::member(FlatFunction::constant(support, v)));
  return out;
}

}  // namespace

TEST_CASE("build_partition hand cases") {
  const Dataset s = xs_only({1, 2});
  const auto ctx = EmpiricalMetricContext::from_sample(s, 2);

  SUBCASE("one cell when epsilon covers the diameter") {
    const auto members = constants({0.0, 0.4, 1.0}, 2);
    const Partition part = build_partition(members, 1.5, ctx);
    CHECK(part.n_cells() == 1);
    CHECK(cell_members(part, 0) == std::vector<std::uint32_t>{0, 1, 2});
  }
  SUBCASE("constants 0, 0.4, 1 at epsilon 0.5 split 2 + 1") {
    const auto members = constants({0.0, 0.4, 1.0}, 2);
    const Partition part = build_partition(members, 0.5, ctx);
    REQUIRE(part.n_cells() == 2);
    CHECK(cell_members(part, 0) == std::vector<std::uint32_t>{0, 1});  // 0.4 -> center 0
    CHECK(cell_members(part, 1) == std::vector<std::uint32_t>{2});
  }
  SUBCASE("equidistant member goes to the lower-index center") {
    // centers end up at 0 and 1; the midpoint 0.5 ties exactly
    const auto members = constants({0.0, 1.0, 0.5}, 2);
    const Partition part = build_partition(members, 0.6, ctx);
    REQUIRE(part.n_cells() == 2);
    CHECK(part.assignment[2] == 0);
  }
}

TEST_CASE("cells partition the member list and respect nearest centers") {
  Rng rng(91);
  for (int trial = 0; trial < 25; ++trial) {
    const PointIndex support = 4 + static_cast<PointIndex>(rng.below(5));
    std::vector<Predictor> members;
    const std::size_t count = 6 + rng.below(18);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> vals(support);
      for (double& v : vals) v = rng.next_unit();
      members.push_back(Predictor::member(FlatFunction::from_dense(vals)));
    }
    Dataset s;
    for (int i = 0; i < 25; ++i) {
      s.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1), 0.0});
    }
    const auto ctx = EmpiricalMetricContext::from_sample(s, support);
    const double eps = rng.uniform(0.05, 0.6);
    const Partition part = build_partition(members, eps, ctx);

    std::size_t total = 0;
    for (std::uint32_t c = 0; c < part.n_cells(); ++c) {
      const auto cell = cell_members(part, c);
      CHECK(!cell.empty());
      total += cell.size();
      // cell contains its own center
      bool has_center = false;
      for (std::uint32_t m : cell) has_center = has_center || m == part.net.center_ids[c];
      CHECK(has_center);
    }
    CHECK(total == members.size());

    for (std::uint32_t i = 0; i < members.size(); ++i) {
      const double assigned =
          emp_metric(members[i], members[part.net.center_ids[part.assignment[i]]], ctx);
      CHECK(assigned <= eps + 1e-12);
      for (std::uint32_t c = 0; c < part.n_cells(); ++c) {
        const double d = emp_metric(members[i], members[part.net.center_ids[c]], ctx);
        CHECK(assigned <= d + 1e-12);
        if (d == assigned) CHECK(part.assignment[i] <= c);  // ties to the lowest center
      }
    }
  }
}

TEST_CASE("cell_members rejects out-of-range cells") {
  const Dataset s = xs_only({1});
  const auto ctx = EmpiricalMetricContext::from_sample(s, 1);
  const auto members = constants({0.2, 0.8}, 1);
  const Partition part = build_partition(members, 0.1, ctx);
  CHECK_THROWS_AS(cell_members(part, part.n_cells()), std::out_of_range);
}
