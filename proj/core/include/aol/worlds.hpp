#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aol/domain.hpp"
#include "aol/rng.hpp"

namespace aol {

// Discrete-design data-generating distribution: x ~ mu over {1..support_size},
// y | x ~ Bernoulli(eta(x)). Risks against it are computed exactly.
struct World {
  std::string id;
  PointIndex support_size = 0;
  std::vector<double> mu;   // sums to 1
  std::vector<double> eta;  // values in [0,1]
  FunctionSpec ref_class;
  // When set, overrides the class oracle (regret construction pins the
  // approximation error through its witness function).
  std::optional<double> pinned_inf_sq;
  std::vector<std::uint8_t> omega;  // construction pattern, empty when n/a
  std::string spec_json;            // replay record: kind + parameters + omega

  // caches filled by finalize_world
  std::vector<double> mu_cdf;
  double noise = 0.0;   // sum mu eta (1 - eta)
  double eta_m1 = 0.0;  // sum mu eta
  double eta_m2 = 0.0;  // sum mu eta^2
  double inf_sq = 0.0;  // inf over the class of sum mu (f - eta)^2
  double min_risk = 0.0;

  Predictor eta_predictor() const;
};

World finalize_world(World w);

Dataset sample_world(const World& w, std::size_t n, Rng& rng);

// sum_x mu(x) [ (pred(x) - eta(x))^2 + eta(x)(1 - eta(x)) ], exactly.
double exact_risk(const World& w, const Predictor& pred);
double exact_risk(const World& w, const FlatFunction& f);

// exact_risk minus the class oracle's minimum risk.
double excess_risk(const World& w, const Predictor& pred);

// inf over the class of sum_a mu_a (f(a) - eta_a)^2, by variant:
// enumeration (FiniteList), coordinate-wise clipping (BoxSequence), greedy
// per-atom gains (VcIndicator), per-support simplex least squares
// (DictionaryHull).
double class_inf_sq(const FunctionSpec& spec, const std::vector<double>& mu,
                    const std::vector<double>& eta);

// Sparse binary vectors with pairwise Hamming distance >= d, built greedily
// in deterministic order (sampling without replacement once enumeration
// exceeds 10^6 candidates). Separation is guaranteed by construction; the
// cardinality bound log|C| >= (d/4) log(k/(6d)) is checked a posteriori.
struct HammingCode {
  PointIndex k = 0;
  std::uint32_t d = 1;
  std::vector<std::vector<PointIndex>> supports;  // sorted atom lists of the ones
  bool meets_cardinality_bound = false;
};

HammingCode d_selection_pack(PointIndex k, std::uint32_t d);

// Minimal integer strictly greater than x.
std::uint64_t strict_ceil(double x);

// Hard-distribution constructions -------------------------------------------

// Indicator-class world: k atoms uniform, eta in {1/2, 3/4} with at most d
// elevated atoms drawn from the d-selection pack; reference class is
// { (3/4) 1{W} : |W| <= d }.
World make_vc_world(std::size_t n, std::uint32_t d, Rng& rng);

enum class HypercubeVariant { Risk, Regret };

// Risk variant: d = strict_ceil(n^{p/(2+p)}) uniform atoms,
// eta_j = 1/2 + omega_j / (4 d^{1/p}) with omega in {0,1}^d (well-specified).
// Regret variant: d = 2 strict_ceil(n^{p/(p-1)}), eta_j = 1/2 + omega_j/4
// with omega in {-1,1}^d; the class minimum is pinned through the witness
// f_omega, giving approximation error (1/16)(1 - d^{-1/p})^2.
World make_hypercube_world(std::size_t n, double p, HypercubeVariant variant, Rng& rng);

// Shifts eta upward until the class distance inf_F ||f - eta|| equals delta
// (within 1e-6, by bisection against the class oracle).
World make_delta_world(double p, double delta, const World& base);

// Experiment worlds ----------------------------------------------------------

// Finite class of random constants against a non-constant mid-range eta.
// With pin_best, one constant is placed at the population-best constant
// sum mu eta so the best mixture cannot beat the best member.
World make_finite_constants_world(std::uint32_t num_constants, PointIndex support,
                                  double eta_lo, double eta_hi, bool pin_best, Rng& rng);

// Two constants around eta = 1/2 whose population risks differ by exactly
// n^{-1/2}; the classic family on which selectors stall at the slow rate.
World make_finite_gap_world(std::size_t n);

// Random dictionary whose population-optimal hull point is the midpoint of
// the first two elements; eta adds an off-span offset on a shared block, so
// the s-sparse oracle and the full-hull oracle coincide.
World make_dictionary_world(std::uint32_t dict_size, std::uint32_t sparsity,
                            PointIndex support, Rng& rng);

}  // namespace aol
