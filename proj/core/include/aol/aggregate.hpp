#pragma once

#include <span>

#include "aol/solvers.hpp"

namespace aol {

struct AggregatorSpec {
  enum class Kind { Star, ExpWeights };
  Kind kind = Kind::Star;
  double beta = 4.0;  // exp-weights temperature
};

// Minimizer over lambda in [0,1] of the empirical risk of
// (1-lambda) g_a + lambda g_b; closed form, 0 when the segment is degenerate.
double segment_ls(const Predictor& g_a, const Predictor& g_b, const Dataset& d);
double segment_ls(const Predictor& g_a, const Predictor& g_b, const LabelMoments& m);

// Least squares over the star of segments joining the empirical risk
// minimizer to every other candidate. The result's empirical risk never
// exceeds the best candidate's.
Predictor star_aggregate(std::span<const Predictor> candidates, const Dataset& d);
Predictor star_aggregate(std::span<const Predictor> candidates, const LabelMoments& m);

// Mixture with weights proportional to exp(-beta * n * empirical risk).
Predictor ew_aggregate(std::span<const Predictor> candidates, const Dataset& d, double beta);
Predictor ew_aggregate(std::span<const Predictor> candidates, const LabelMoments& m, double beta);

Predictor ms_aggregate(const AggregatorSpec& spec, std::span<const Predictor> candidates,
                       const Dataset& d);
Predictor ms_aggregate(const AggregatorSpec& spec, std::span<const Predictor> candidates,
                       const LabelMoments& m);

}  // namespace aol
