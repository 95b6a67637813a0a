#pragma once

#include <span>
#include <vector>

#include "aol/domain.hpp"
#include "aol/rng.hpp"

namespace aol {

// Per-atom view of the x-marginal of a sample; backs the empirical L2
// pseudo-metric d_S. The dense atom->weight table makes pairwise distances
// O(#deviations) for sparse members.
struct EmpiricalMetricContext {
  PointIndex support_size = 0;
  std::vector<PointIndex> atoms;   // sorted distinct sample atoms
  std::vector<double> weight;     // aligned with atoms, counts / n
  std::vector<double> w_of_atom;  // dense, size support_size + 1
  std::size_t n = 0;

  static EmpiricalMetricContext from_sample(const Dataset& d, PointIndex support_size);
};

// Per-atom label sufficient statistics; emp_risk against these matches the
// pairwise definition up to floating-point summation order.
struct LabelMoments {
  PointIndex support_size = 0;
  std::vector<PointIndex> atoms;
  std::vector<double> cnt, sy, syy;  // aligned with atoms
  std::size_t n = 0;
  double cnt_total = 0, sy_total = 0, syy_total = 0;
  std::vector<std::uint32_t> slot_of_atom;  // dense, 0 = absent, else slot+1

  static LabelMoments from_sample(const Dataset& d, PointIndex support_size);
};

// sqrt( (1/n) sum_{x in S} (f(x) - g(x))^2 )
double emp_metric(const FlatFunction& f, const FlatFunction& g, const EmpiricalMetricContext& ctx);
double emp_metric(const Predictor& f, const Predictor& g, const EmpiricalMetricContext& ctx);

// (1/n) sum (f(x) - y)^2
double emp_risk(const FlatFunction& f, const Dataset& d);
double emp_risk(const Predictor& f, const Dataset& d);
double emp_risk(const FlatFunction& f, const LabelMoments& m);
double emp_risk(const Predictor& f, const LabelMoments& m);

// Proper epsilon-net: center_ids index into the member list the net was
// built from; every member is within epsilon of some center and centers are
// pairwise more than epsilon apart (farthest-point construction).
struct EpsilonNet {
  double epsilon = 0;
  std::vector<std::uint32_t> center_ids;

  std::uint32_t size() const { return static_cast<std::uint32_t>(center_ids.size()); }
};

// Farthest-point greedy cover. Seeds at member 0, repeatedly adds the member
// farthest from the current centers while that distance exceeds epsilon.
// Ties are broken toward the lowest member index. |centers| upper-bounds the
// epsilon-covering number of the member list.
EpsilonNet greedy_cover(std::span<const Predictor> members, double epsilon,
                        const EmpiricalMetricContext& ctx);

struct RademacherEstimate {
  double value = 0;
  double stderr_ = 0;
};

// Monte Carlo estimate of E_sigma sup_g (1/n) sum_i sigma_i g(z_i), where the
// class is given as a value table (rows: functions, columns: sample points)
// or as members evaluated along the sample.
RademacherEstimate rademacher_mc(const std::vector<std::vector<double>>& values,
                                 std::size_t reps, Rng& rng);
RademacherEstimate rademacher_mc(std::span<const Predictor> members, const Dataset& s,
                                 std::size_t reps, Rng& rng);

// Exhaustive version for small n; used as a test oracle.
double rademacher_exact(const std::vector<std::vector<double>>& values);

}  // namespace aol
