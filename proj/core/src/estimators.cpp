#include "aol/estimators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aol {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double grid_resolution(const FunctionSpec& spec, const AolConfig& cfg) {
  if (cfg.grid_step_override) return *cfg.grid_step_override;
  if (const auto* b = std::get_if<BoxSequence>(&spec)) return b->grid_step;
  return 0.0;  // exact member lists have no refinement error
}

FunctionSpec apply_grid_override(const FunctionSpec& spec, const AolConfig& cfg) {
  if (!cfg.grid_step_override) return spec;
  FunctionSpec out = spec;
  if (auto* b = std::get_if<BoxSequence>(&out)) b->grid_step = *cfg.grid_step_override;
  return out;
}

}  // namespace

double epsilon_rule(const EpsilonRule& rule, std::size_t n) {
  if (n < 1) throw std::invalid_argument("epsilon_rule: n >= 1");
  const double nd = static_cast<double>(n);
  switch (rule.kind) {
    case EpsilonRule::Kind::Poly:
      if (rule.p <= 0) throw std::invalid_argument("epsilon_rule: p must be positive");
      return std::pow(nd, -1.0 / (2.0 + rule.p));
    case EpsilonRule::Kind::Vc:
      return std::pow(nd, -0.5);
    case EpsilonRule::Kind::Explicit:
      if (rule.value <= 0) throw std::invalid_argument("epsilon_rule: explicit radius must be positive");
      return rule.value;
  }
  throw std::logic_error("epsilon_rule: unknown kind");
}

FitRecord aol_fit(std::span<const Predictor> members, const Dataset& d3n, const AolConfig& cfg) {
  const auto t0 = Clock::now();
  if (members.empty()) throw std::invalid_argument("aol_fit: empty member list");
  const PointIndex support = members.front().support_size();
  const ThreeWaySplit split = split_threeway(d3n);
  const std::size_t n = split.s.size();
  const double eps = epsilon_rule(cfg.epsilon, n);

  const auto ctx = EmpiricalMetricContext::from_sample(split.s, support);
  const Partition part = build_partition(members, eps, ctx);

  const auto m_prime = LabelMoments::from_sample(split.s_prime, support);
  const double refinement = cfg.grid_step_override.value_or(0.0);
  std::vector<Predictor> leaders;
  std::vector<double> cell_risks;
  leaders.reserve(part.n_cells());
  cell_risks.reserve(part.n_cells());
  for (std::uint32_t c = 0; c < part.n_cells(); ++c) {
    const std::vector<std::uint32_t> cell = cell_members(part, c);
    const ErmResult erm = erm_cell(cell, members, m_prime, refinement);
    leaders.push_back(erm.predictor);
    cell_risks.push_back(erm.empirical_risk);
  }

  const auto m_dprime = LabelMoments::from_sample(split.s_dprime, support);
  FitRecord rec;
  rec.predictor = ms_aggregate(cfg.aggregator, leaders, m_dprime);
  rec.n_cells = part.n_cells();
  rec.epsilon_used = eps;
  rec.cell_risks = std::move(cell_risks);
  rec.wall_ms = ms_since(t0);
  return rec;
}

FitRecord aol_fit(const FunctionSpec& spec, const Dataset& d3n, const AolConfig& cfg) {
  const FunctionSpec effective = apply_grid_override(spec, cfg);
  const std::vector<Predictor> members = enumerate_members(effective, cfg.member_budget);
  AolConfig inner = cfg;
  inner.grid_step_override = grid_resolution(effective, cfg);
  return aol_fit(members, d3n, inner);
}

FitRecord skeleton_fit(std::span<const Predictor> members, const Dataset& d3n, double epsilon,
                       const AggregatorSpec& aggregator) {
  const auto t0 = Clock::now();
  if (members.empty()) throw std::invalid_argument("skeleton_fit: empty member list");
  const PointIndex support = members.front().support_size();
  const ThreeWaySplit split = split_threeway(d3n);

  const auto ctx = EmpiricalMetricContext::from_sample(split.s, support);
  const EpsilonNet net = greedy_cover(members, epsilon, ctx);

  std::vector<Predictor> centers;
  centers.reserve(net.size());
  for (std::uint32_t id : net.center_ids) centers.push_back(members[id]);

  const auto m_dprime = LabelMoments::from_sample(split.s_dprime, support);
  FitRecord rec;
  rec.predictor = ms_aggregate(aggregator, centers, m_dprime);
  rec.n_cells = net.size();
  rec.epsilon_used = epsilon;
  rec.wall_ms = ms_since(t0);
  return rec;
}

FitRecord skeleton_fit(const FunctionSpec& spec, const Dataset& d3n, double epsilon,
                       const AggregatorSpec& aggregator, std::uint64_t member_budget) {
  const std::vector<Predictor> members = enumerate_members(spec, member_budget);
  return skeleton_fit(members, d3n, epsilon, aggregator);
}

FitRecord global_erm_fit(std::span<const Predictor> members, const Dataset& d) {
  const auto t0 = Clock::now();
  if (members.empty()) throw std::invalid_argument("global_erm_fit: empty member list");
  const ErmResult erm = erm_enumerate(members, d);
  FitRecord rec;
  rec.predictor = erm.predictor;
  rec.n_cells = 1;
  rec.epsilon_used = 0.0;
  rec.cell_risks = {erm.empirical_risk};
  rec.wall_ms = ms_since(t0);
  return rec;
}

FitRecord global_erm_fit(const FunctionSpec& spec, const Dataset& d, std::uint64_t member_budget) {
  const std::vector<Predictor> members = enumerate_members(spec, member_budget);
  return global_erm_fit(members, d);
}

FitRecord sparse_convex_fit(const DictionaryHull& hull, const Dataset& d3n,
                            const AggregatorSpec& aggregator, double tol,
                            std::uint64_t pattern_budget) {
  const auto t0 = Clock::now();
  const std::size_t m = hull.dictionary.size();
  if (m == 0) throw std::invalid_argument("sparse_convex_fit: empty dictionary");
  const std::uint32_t s = hull.sparsity;
  if (s < 1 || s > m) throw std::invalid_argument("sparse_convex_fit: need 1 <= s <= M");

  // pattern count sum_{j<=s} C(M, j)
  std::uint64_t patterns = 0;
  for (std::uint32_t j = 1; j <= s; ++j) {
    std::uint64_t binom = 1;
    for (std::uint32_t i = 1; i <= j; ++i) binom = binom * (m - j + i) / i;
    patterns += binom;
    if (patterns > pattern_budget) {
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "sparse_convex_fit: %llu support patterns exceed the budget",
                    static_cast<unsigned long long>(patterns));
      throw std::length_error(msg);
    }
  }

  const PointIndex support_size = hull.dictionary.front().support_size;
  const ThreeWaySplit split = split_threeway(d3n);
  const std::size_t n = split.s.size();
  const auto m_prime = LabelMoments::from_sample(split.s_prime, support_size);
  const std::size_t max_iter = default_fw_max_iter(m, n);

  // stage A: least squares on every support of size <= s, aggregated on S''
  std::vector<Predictor> stage_a;
  stage_a.reserve(patterns);
  std::vector<std::uint32_t> idx;
  for (std::uint32_t card = 1; card <= s; ++card) {
    idx.assign(card, 0);
    for (std::uint32_t i = 0; i < card; ++i) idx[i] = i;
    while (true) {
      stage_a.push_back(erm_simplex(hull.dictionary, idx, m_prime, tol, max_iter).predictor);
      std::uint32_t i = card;
      while (i > 0 && idx[i - 1] == m - card + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::uint32_t j = i; j < card; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  const auto m_dprime = LabelMoments::from_sample(split.s_dprime, support_size);
  const Predictor f_sparse = ms_aggregate(aggregator, stage_a, m_dprime);

  // stage B: least squares over the full simplex on S'
  std::vector<std::uint32_t> full(m);
  for (std::uint32_t i = 0; i < m; ++i) full[i] = i;
  const Predictor f_hull = erm_simplex(hull.dictionary, full, m_prime, tol, max_iter).predictor;

  // final two-candidate aggregation on S
  const auto m_s = LabelMoments::from_sample(split.s, support_size);
  const std::vector<Predictor> pair = {f_sparse, f_hull};
  FitRecord rec;
  rec.predictor = ms_aggregate(aggregator, pair, m_s);
  rec.n_cells = static_cast<std::uint32_t>(stage_a.size());
  rec.epsilon_used = 0.0;
  rec.cell_risks = {emp_risk(f_sparse, m_s), emp_risk(f_hull, m_s)};
  rec.stage_predictors = {f_sparse, f_hull};
  rec.wall_ms = ms_since(t0);
  return rec;
}

}  // namespace aol
