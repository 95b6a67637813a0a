#include "aol/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aol {

namespace {

struct SegmentFit {
  double lambda = 0.0;
  double risk = 0.0;  // empirical risk of the mixture at lambda
};

// Empirical risk along (1-l) a + l b is r_a + 2 l B + l^2 D with
// B = (1/n) sum (a(x)-y)(b(x)-a(x)) and D = (1/n) sum (b(x)-a(x))^2.
SegmentFit segment_fit(const FlatFunction& a, const FlatFunction& b, const LabelMoments& m,
                       double risk_a) {
  double bsum = 0.0, dsum = 0.0;
  for (std::size_t s = 0; s < m.atoms.size(); ++s) {
    const PointIndex atom = m.atoms[s];
    const double va = a.value_at(atom);
    const double diff = b.value_at(atom) - va;
    bsum += (va * m.cnt[s] - m.sy[s]) * diff;
    dsum += m.cnt[s] * diff * diff;
  }
  const double inv_n = 1.0 / static_cast<double>(m.n);
  bsum *= inv_n;
  dsum *= inv_n;
  SegmentFit fit;
  if (dsum <= 0.0) {
    fit.lambda = 0.0;
    fit.risk = risk_a;
    return fit;
  }
  fit.lambda = std::clamp(-bsum / dsum, 0.0, 1.0);
  fit.risk = risk_a + 2.0 * fit.lambda * bsum + fit.lambda * fit.lambda * dsum;
  return fit;
}

}  // namespace

double segment_ls(const Predictor& g_a, const Predictor& g_b, const LabelMoments& m) {
  const double risk_a = emp_risk(g_a, m);
  return segment_fit(g_a.flat(), g_b.flat(), m, risk_a).lambda;
}

double segment_ls(const Predictor& g_a, const Predictor& g_b, const Dataset& d) {
  if (d.empty()) throw std::invalid_argument("segment_ls: empty sample");
  return segment_ls(g_a, g_b, LabelMoments::from_sample(d, g_a.support_size()));
}

Predictor star_aggregate(std::span<const Predictor> candidates, const LabelMoments& m) {
  if (candidates.empty()) throw std::invalid_argument("star_aggregate: no candidates");
  const ErmResult erm = erm_enumerate(candidates, m);
  if (candidates.size() == 1) return candidates[0];

  double best_risk = erm.empirical_risk;  // lambda = 0 everywhere
  std::size_t best_j = candidates.size();
  double best_lambda = 0.0;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (j == erm.chosen_index) continue;
    const SegmentFit fit = segment_fit(erm.predictor.flat(), candidates[j].flat(), m,
                                       erm.empirical_risk);
    if (fit.lambda > 0.0 && fit.risk < best_risk) {
      best_risk = fit.risk;
      best_j = j;
      best_lambda = fit.lambda;
    }
  }
  if (best_j == candidates.size()) return erm.predictor;

  Predictor mix = Predictor::mixture({erm.predictor, candidates[best_j]},
                                     {1.0 - best_lambda, best_lambda});
  // guard against round-off inverting the selection
  if (emp_risk(mix, m) > erm.empirical_risk) return erm.predictor;
  return mix;
}

Predictor star_aggregate(std::span<const Predictor> candidates, const Dataset& d) {
  if (candidates.empty()) throw std::invalid_argument("star_aggregate: no candidates");
  return star_aggregate(candidates, LabelMoments::from_sample(d, candidates.front().support_size()));
}

Predictor ew_aggregate(std::span<const Predictor> candidates, const LabelMoments& m,
                       double beta) {
  if (candidates.empty()) throw std::invalid_argument("ew_aggregate: no candidates");
  if (beta <= 0) throw std::invalid_argument("ew_aggregate: beta must be positive");
  std::vector<double> risks(candidates.size());
  double min_risk = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    risks[j] = emp_risk(candidates[j], m);
    min_risk = std::min(min_risk, risks[j]);
  }
  // shifting by the minimum leaves the weights unchanged and avoids underflow
  std::vector<double> weights(candidates.size());
  double total = 0.0;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    weights[j] = std::exp(-beta * static_cast<double>(m.n) * (risks[j] - min_risk));
    total += weights[j];
  }
  for (double& w : weights) w /= total;
  if (candidates.size() == 1) return candidates[0];
  return Predictor::mixture(std::vector<Predictor>(candidates.begin(), candidates.end()),
                            std::move(weights));
}

Predictor ew_aggregate(std::span<const Predictor> candidates, const Dataset& d, double beta) {
  if (candidates.empty()) throw std::invalid_argument("ew_aggregate: no candidates");
  return ew_aggregate(candidates, LabelMoments::from_sample(d, candidates.front().support_size()),
                      beta);
}

Predictor ms_aggregate(const AggregatorSpec& spec, std::span<const Predictor> candidates,
                       const LabelMoments& m) {
  if (candidates.empty()) throw std::invalid_argument("ms_aggregate: no candidates");
  switch (spec.kind) {
    case AggregatorSpec::Kind::Star:
      return star_aggregate(candidates, m);
    case AggregatorSpec::Kind::ExpWeights:
      return ew_aggregate(candidates, m, spec.beta);
  }
  throw std::logic_error("ms_aggregate: unknown aggregator kind");
}

Predictor ms_aggregate(const AggregatorSpec& spec, std::span<const Predictor> candidates,
                       const Dataset& d) {
  if (candidates.empty()) throw std::invalid_argument("ms_aggregate: no candidates");
  return ms_aggregate(spec, candidates,
                      LabelMoments::from_sample(d, candidates.front().support_size()));
}

}  // namespace aol
