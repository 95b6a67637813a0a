#include "aol/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aol {

EmpiricalMetricContext EmpiricalMetricContext::from_sample(const Dataset& d,
                                                           PointIndex support_size) {
  if (d.empty()) throw std::invalid_argument("metric context: empty sample");
  EmpiricalMetricContext ctx;
  ctx.support_size = support_size;
  ctx.n = d.size();
  ctx.w_of_atom.assign(support_size + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(d.size());
  for (const LabeledPair& z : d.pairs) {
    if (z.x < 1 || z.x > support_size) throw std::out_of_range("unknown design point");
    ctx.w_of_atom[z.x] += inv_n;
  }
  for (PointIndex a = 1; a <= support_size; ++a) {
    if (ctx.w_of_atom[a] > 0) {
      ctx.atoms.push_back(a);
      ctx.weight.push_back(ctx.w_of_atom[a]);
    }
  }
  return ctx;
}

LabelMoments LabelMoments::from_sample(const Dataset& d, PointIndex support_size) {
  if (d.empty()) throw std::invalid_argument("label moments: empty sample");
  LabelMoments m;
  m.support_size = support_size;
  m.n = d.size();
  std::vector<double> cnt(support_size + 1, 0.0), sy(support_size + 1, 0.0),
      syy(support_size + 1, 0.0);
  for (const LabeledPair& z : d.pairs) {
    if (z.x < 1 || z.x > support_size) throw std::out_of_range("unknown design point");
    cnt[z.x] += 1.0;
    sy[z.x] += z.y;
    syy[z.x] += z.y * z.y;
  }
  m.slot_of_atom.assign(support_size + 1, 0);
  for (PointIndex a = 1; a <= support_size; ++a) {
    if (cnt[a] > 0) {
      m.atoms.push_back(a);
      m.cnt.push_back(cnt[a]);
      m.sy.push_back(sy[a]);
      m.syy.push_back(syy[a]);
      m.slot_of_atom[a] = static_cast<std::uint32_t>(m.atoms.size());
      m.cnt_total += cnt[a];
      m.sy_total += sy[a];
      m.syy_total += syy[a];
    }
  }
  return m;
}

double emp_metric(const FlatFunction& f, const FlatFunction& g,
                  const EmpiricalMetricContext& ctx) {
  const double base_diff = f.baseline - g.baseline;
  double sq = 0.0;
  double covered = 0.0;  // weight of deviation atoms handled explicitly
  std::size_t i = 0, j = 0;
  while (i < f.devs.size() || j < g.devs.size()) {
    PointIndex a;
    double vf, vg;
    if (j >= g.devs.size() || (i < f.devs.size() && f.devs[i].first < g.devs[j].first)) {
      a = f.devs[i].first;
      vf = f.devs[i].second;
      vg = g.baseline;
      ++i;
    } else if (i >= f.devs.size() || g.devs[j].first < f.devs[i].first) {
      a = g.devs[j].first;
      vf = f.baseline;
      vg = g.devs[j].second;
      ++j;
    } else {
      a = f.devs[i].first;
      vf = f.devs[i].second;
      vg = g.devs[j].second;
      ++i;
      ++j;
    }
    if (a > ctx.support_size) throw std::out_of_range("unknown design point");
    const double w = ctx.w_of_atom[a];
    if (w > 0) {
      const double diff = vf - vg;
      sq += w * diff * diff;
      covered += w;
    }
  }
  sq += (1.0 - covered) * base_diff * base_diff;
  return std::sqrt(std::max(0.0, sq));
}

double emp_metric(const Predictor& f, const Predictor& g, const EmpiricalMetricContext& ctx) {
  return emp_metric(f.flat(), g.flat(), ctx);
}

double emp_risk(const FlatFunction& f, const Dataset& d) {
  if (d.empty()) throw std::invalid_argument("emp_risk: empty sample");
  // route through the per-atom statistics so that every caller sees
  // bit-identical risks regardless of the entry point
  return emp_risk(f, LabelMoments::from_sample(d, f.support_size));
}

double emp_risk(const Predictor& f, const Dataset& d) { return emp_risk(f.flat(), d); }

double emp_risk(const FlatFunction& f, const LabelMoments& m) {
  const double b = f.baseline;
  // all atoms at the baseline, then per-deviation corrections
  double total = b * b * m.cnt_total - 2.0 * b * m.sy_total + m.syy_total;
  for (const auto& dv : f.devs) {
    if (dv.first > m.support_size) throw std::out_of_range("unknown design point");
    const std::uint32_t slot = m.slot_of_atom[dv.first];
    if (slot == 0) continue;
    const double v = dv.second;
    total += (v * v - b * b) * m.cnt[slot - 1] - 2.0 * (v - b) * m.sy[slot - 1];
  }
  return total / static_cast<double>(m.n);
}

double emp_risk(const Predictor& f, const LabelMoments& m) { return emp_risk(f.flat(), m); }

EpsilonNet greedy_cover(std::span<const Predictor> members, double epsilon,
                        const EmpiricalMetricContext& ctx) {
  if (members.empty()) throw std::invalid_argument("greedy_cover: no members");
  if (epsilon <= 0) throw std::invalid_argument("greedy_cover: epsilon must be positive");

  EpsilonNet net;
  net.epsilon = epsilon;
  net.center_ids.push_back(0);

  std::vector<double> dist(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    dist[i] = emp_metric(members[i], members[0], ctx);
  }
  const double tol = epsilon + 1e-12;
  while (true) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (dist[i] > dist[far]) far = i;  // strict: ties keep the lowest index
    }
    if (dist[far] <= tol) break;
    net.center_ids.push_back(static_cast<std::uint32_t>(far));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double d = emp_metric(members[i], members[far], ctx);
      if (d < dist[i]) dist[i] = d;
    }
  }
  return net;
}

RademacherEstimate rademacher_mc(const std::vector<std::vector<double>>& values,
                                 std::size_t reps, Rng& rng) {
  if (values.empty() || values.front().empty()) {
    throw std::invalid_argument("rademacher_mc: empty class or sample");
  }
  if (reps < 1) throw std::invalid_argument("rademacher_mc: reps must be >= 1");
  const std::size_t n = values.front().size();
  std::vector<int> sign(n);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < n; ++i) sign[i] = rng.bernoulli(0.5) ? 1 : -1;
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& row : values) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += sign[i] * row[i];
      sup = std::max(sup, s / static_cast<double>(n));
    }
    sum += sup;
    sumsq += sup * sup;
  }
  RademacherEstimate est;
  est.value = sum / static_cast<double>(reps);
  const double var = std::max(0.0, sumsq / static_cast<double>(reps) - est.value * est.value);
  est.stderr_ = std::sqrt(var / static_cast<double>(reps));
  return est;
}

RademacherEstimate rademacher_mc(std::span<const Predictor> members, const Dataset& s,
                                 std::size_t reps, Rng& rng) {
  if (members.empty() || s.empty()) {
    throw std::invalid_argument("rademacher_mc: empty class or sample");
  }
  std::vector<std::vector<double>> values(members.size(), std::vector<double>(s.size()));
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      values[m][i] = evaluate(members[m], s.pairs[i].x);
    }
  }
  return rademacher_mc(values, reps, rng);
}

double rademacher_exact(const std::vector<std::vector<double>>& values) {
  const std::size_t n = values.front().size();
  if (n > 20) throw std::invalid_argument("rademacher_exact: sample too large to enumerate");
  const std::size_t total = std::size_t{1} << n;
  double sum = 0.0;
  for (std::size_t mask = 0; mask < total; ++mask) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& row : values) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += ((mask >> i) & 1u) ? row[i] : -row[i];
      }
      sup = std::max(sup, s / static_cast<double>(n));
    }
    sum += sup;
  }
  return sum / static_cast<double>(total);
}

}  // namespace aol
