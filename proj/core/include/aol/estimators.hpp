#pragma once

#include <optional>
#include <span>

#include "aol/aggregate.hpp"
#include "aol/netpart.hpp"

namespace aol {

struct EpsilonRule {
  enum class Kind { Poly, Vc, Explicit };
  Kind kind = Kind::Poly;
  double p = 2.0;      // poly regime exponent
  double value = 0.1;  // explicit radius
};

// poly p -> n^{-1/(2+p)}, vc -> n^{-1/2}, explicit -> the given value.
double epsilon_rule(const EpsilonRule& rule, std::size_t n);

struct AolConfig {
  EpsilonRule epsilon;
  AggregatorSpec aggregator;
  std::uint64_t member_budget = 65536;
  std::optional<double> grid_step_override;  // replaces a BoxSequence grid
};

struct FitRecord {
  Predictor predictor;
  std::uint32_t n_cells = 1;
  double epsilon_used = 0.0;
  std::vector<double> cell_risks;  // per-cell least squares risks on S'
  // the two stage candidates of the sparse convex procedure, empty otherwise
  std::vector<Predictor> stage_predictors;
  double wall_ms = 0.0;
};

// Three-stage fit: net and partition on S, least squares per cell on S',
// sharp MS-aggregation of the cell solutions on S''. Member lists stand in
// for the class; the spec overload enumerates within the budget.
FitRecord aol_fit(const FunctionSpec& spec, const Dataset& d3n, const AolConfig& cfg);
FitRecord aol_fit(std::span<const Predictor> members, const Dataset& d3n, const AolConfig& cfg);

// Net on S, aggregate the centers themselves on S''; S' is unused.
FitRecord skeleton_fit(const FunctionSpec& spec, const Dataset& d3n, double epsilon,
                       const AggregatorSpec& aggregator, std::uint64_t member_budget);
FitRecord skeleton_fit(std::span<const Predictor> members, const Dataset& d3n, double epsilon,
                       const AggregatorSpec& aggregator);

// Least squares over the whole member list on the dataset as passed.
FitRecord global_erm_fit(const FunctionSpec& spec, const Dataset& d, std::uint64_t member_budget);
FitRecord global_erm_fit(std::span<const Predictor> members, const Dataset& d);

// Two-stage sparse convex aggregation: per-support simplex least squares on
// S' aggregated on S'', a full-simplex fit on S', and a final two-candidate
// aggregation on S.
FitRecord sparse_convex_fit(const DictionaryHull& hull, const Dataset& d3n,
                            const AggregatorSpec& aggregator, double tol,
                            std::uint64_t pattern_budget = 1u << 20);

}  // namespace aol
