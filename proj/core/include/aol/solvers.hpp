#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aol/empirical.hpp"

namespace aol {

struct Certificate {
  enum class Kind { ExactEnumeration, FwGap, RefinementNet };
  Kind kind = Kind::ExactEnumeration;
  double value = 0.0;  // duality gap or refinement resolution
};

struct ErmResult {
  Predictor predictor;
  std::uint32_t chosen_index = 0;  // meaningful for enumeration solvers
  double empirical_risk = 0.0;
  Certificate certificate;
  bool converged = true;  // false when the simplex solver hit max_iter with gap > tol
};

// Least squares by exhaustive enumeration; ties go to the lowest index.
ErmResult erm_enumerate(std::span<const Predictor> candidates, const Dataset& d);
ErmResult erm_enumerate(std::span<const Predictor> candidates, const LabelMoments& m);

// Enumeration restricted to one partition cell. The member list is the finite
// refinement of the class, so the certificate carries its grid resolution.
ErmResult erm_cell(std::span<const std::uint32_t> cell, std::span<const Predictor> members,
                   const LabelMoments& m, double refinement_delta);

// min over theta in the simplex of theta' G theta - 2 c' theta + r0.
// Frank-Wolfe with exact line search from the best vertex; the returned gap
// upper-bounds the suboptimality.
struct SimplexLsResult {
  std::vector<double> theta;
  double objective = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

SimplexLsResult simplex_least_squares(const std::vector<std::vector<double>>& gram,
                                      const std::vector<double>& cross, double r0, double tol,
                                      std::size_t max_iter,
                                      std::vector<double>* objective_trace = nullptr);

// Simplex-constrained least squares over the dictionary elements indexed by
// `support`, fit to the sample behind `m`.
ErmResult erm_simplex(std::span<const FlatFunction> dictionary,
                      std::span<const std::uint32_t> support, const LabelMoments& m,
                      double tol, std::size_t max_iter);

std::size_t default_fw_max_iter(std::size_t support_size, std::size_t n);

}  // namespace aol
