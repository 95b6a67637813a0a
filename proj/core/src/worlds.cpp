#include "aol/worlds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "aol/solvers.hpp"

namespace aol {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t strict_ceil(double x) {
  if (x < 0) throw std::invalid_argument("strict_ceil: negative argument");
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::uint64_t>(r) + 1;
  }
  return static_cast<std::uint64_t>(std::ceil(x));
}

Predictor World::eta_predictor() const {
  return Predictor::member(FlatFunction::from_dense(eta));
}

World finalize_world(World w) {
  if (w.support_size == 0 || w.mu.size() != w.support_size || w.eta.size() != w.support_size) {
    throw std::invalid_argument("world: mu/eta must cover the support");
  }
  w.mu_cdf.resize(w.support_size);
  w.noise = w.eta_m1 = w.eta_m2 = 0.0;
  // compensated sums keep the mass check meaningful on large supports
  double total = 0.0, c_total = 0.0, c_noise = 0.0, c_m1 = 0.0, c_m2 = 0.0;
  auto kahan = [](double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (PointIndex a = 0; a < w.support_size; ++a) {
    const double m = w.mu[a];
    const double e = w.eta[a];
    if (m < 0) throw std::invalid_argument("world: negative mass");
    if (e < 0 || e > 1) throw std::invalid_argument("world: eta outside [0,1]");
    kahan(total, c_total, m);
    w.mu_cdf[a] = total;
    kahan(w.noise, c_noise, m * e * (1.0 - e));
    kahan(w.eta_m1, c_m1, m * e);
    kahan(w.eta_m2, c_m2, m * e * e);
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("world: mu must sum to 1");
  w.mu_cdf.back() = 1.0;
  w.inf_sq = w.pinned_inf_sq ? *w.pinned_inf_sq : class_inf_sq(w.ref_class, w.mu, w.eta);
  w.min_risk = w.noise + w.inf_sq;
  return w;
}

Dataset sample_world(const World& w, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_world: n >= 1");
  Dataset d;
  d.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    // first atom whose cumulative mass strictly exceeds u; zero-mass atoms
    // can never be drawn
    auto it = std::upper_bound(w.mu_cdf.begin(), w.mu_cdf.end(), u);
    if (it == w.mu_cdf.end()) --it;
    const auto atom = static_cast<PointIndex>(it - w.mu_cdf.begin()) + 1;
    const double y = rng.bernoulli(w.eta[atom - 1]) ? 1.0 : 0.0;
    d.pairs.push_back({atom, y});
  }
  return d;
}

double exact_risk(const World& w, const FlatFunction& f) {
  if (f.support_size != w.support_size) {
    throw std::invalid_argument("exact_risk: predictor support does not match the world");
  }
  const double b = f.baseline;
  double total = b * b - 2.0 * b * w.eta_m1 + w.eta_m2;  // all atoms at the baseline
  for (const auto& dv : f.devs) {
    const double m = w.mu[dv.first - 1];
    if (m == 0.0) continue;
    const double e = w.eta[dv.first - 1];
    const double vd = dv.second - e;
    const double bd = b - e;
    total += m * (vd * vd - bd * bd);
  }
  return total + w.noise;
}

double exact_risk(const World& w, const Predictor& pred) { return exact_risk(w, pred.flat()); }

double excess_risk(const World& w, const Predictor& pred) {
  return exact_risk(w, pred) - w.min_risk;
}

// --------------------------------------------------------------------------
// Class oracles
// --------------------------------------------------------------------------

namespace {

double flat_sq_distance(const FlatFunction& f, const std::vector<double>& mu,
                        const std::vector<double>& eta, double m1, double m2) {
  const double b = f.baseline;
  double total = b * b - 2.0 * b * m1 + m2;
  for (const auto& dv : f.devs) {
    const double m = mu[dv.first - 1];
    if (m == 0.0) continue;
    const double e = eta[dv.first - 1];
    const double vd = dv.second - e;
    const double bd = b - e;
    total += m * (vd * vd - bd * bd);
  }
  return total;
}

double inf_sq_finite(const FiniteList& fl, const std::vector<double>& mu,
                     const std::vector<double>& eta) {
  if (fl.members.empty()) throw std::invalid_argument("class oracle: empty finite class");
  double m1 = 0, m2 = 0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    m1 += mu[a] * eta[a];
    m2 += mu[a] * eta[a] * eta[a];
  }
  double best = std::numeric_limits<double>::infinity();
  for (const FlatFunction& f : fl.members) {
    best = std::min(best, flat_sq_distance(f, mu, eta, m1, m2));
  }
  return std::max(0.0, best);
}

double inf_sq_box(const BoxSequence& b, const std::vector<double>& mu,
                  const std::vector<double>& eta) {
  double total = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (mu[a] == 0.0) continue;
    const auto j = static_cast<PointIndex>(a + 1);
    double dist;
    if (j <= b.truncation) {
      const double half = std::pow(static_cast<double>(j), -1.0 / b.p) / 2.0;
      const double lo = 0.5 - half, hi = 0.5 + half;
      dist = eta[a] < lo ? lo - eta[a] : (eta[a] > hi ? eta[a] - hi : 0.0);
    } else {
      dist = std::abs(eta[a] - 0.5);
    }
    total += mu[a] * dist * dist;
  }
  return total;
}

double inf_sq_vc(const VcIndicator& vc, const std::vector<double>& mu,
                 const std::vector<double>& eta) {
  // risk decomposes per atom; the best support collects the d largest
  // positive gains of switching an atom from 0 to the amplitude
  double base = 0.0;
  std::vector<std::pair<double, PointIndex>> gains;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const double e = eta[a];
    base += mu[a] * e * e;
    const double amp_err = vc.amplitude - e;
    const double gain = mu[a] * (e * e - amp_err * amp_err);
    if (gain > 0) gains.emplace_back(-gain, static_cast<PointIndex>(a + 1));
  }
  std::sort(gains.begin(), gains.end());  // by gain descending, atom ascending on ties
  double taken = 0.0;
  for (std::size_t i = 0; i < gains.size() && i < vc.d; ++i) taken += -gains[i].first;
  return std::max(0.0, base - taken);
}

double inf_sq_dictionary(const DictionaryHull& hull, const std::vector<double>& mu,
                         const std::vector<double>& eta) {
  const std::size_t m = hull.dictionary.size();
  if (m == 0) throw std::invalid_argument("class oracle: empty dictionary");
  const std::uint32_t s = std::min<std::uint32_t>(hull.sparsity, static_cast<std::uint32_t>(m));
  if (s < 1) throw std::invalid_argument("class oracle: sparsity >= 1");

  // population Gram and cross moments on the support
  std::vector<std::vector<double>> vals(m, std::vector<double>(mu.size()));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t a = 0; a < mu.size(); ++a) {
      vals[j][a] = hull.dictionary[j].value_at(static_cast<PointIndex>(a + 1));
    }
  }
  std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
  std::vector<double> cross(m, 0.0);
  double r0 = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (mu[a] == 0.0) continue;
    r0 += mu[a] * eta[a] * eta[a];
    for (std::size_t j = 0; j < m; ++j) {
      cross[j] += mu[a] * eta[a] * vals[j][a];
      for (std::size_t l = j; l < m; ++l) gram[j][l] += mu[a] * vals[j][a] * vals[l][a];
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < j; ++l) gram[j][l] = gram[l][j];
  }

  // supports of size exactly s cover every sparser pattern
  std::vector<std::uint32_t> idx(s);
  for (std::uint32_t i = 0; i < s; ++i) idx[i] = i;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::vector<double>> g(s, std::vector<double>(s));
    std::vector<double> c(s);
    for (std::uint32_t i = 0; i < s; ++i) {
      c[i] = cross[idx[i]];
      for (std::uint32_t j = 0; j < s; ++j) g[i][j] = gram[idx[i]][idx[j]];
    }
    const SimplexLsResult sol = simplex_least_squares(g, c, r0, 1e-8, 500000);
    best = std::min(best, sol.objective);
    // next combination
    std::uint32_t i = s;
    while (i > 0 && idx[i - 1] == m - s + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::uint32_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::max(0.0, best);
}

}  // namespace

double class_inf_sq(const FunctionSpec& spec, const std::vector<double>& mu,
                    const std::vector<double>& eta) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteList>) {
          return inf_sq_finite(s, mu, eta);
        } else if constexpr (std::is_same_v<T, BoxSequence>) {
          return inf_sq_box(s, mu, eta);
        } else if constexpr (std::is_same_v<T, VcIndicator>) {
          return inf_sq_vc(s, mu, eta);
        } else {
          return inf_sq_dictionary(s, mu, eta);
        }
      },
      spec);
}

// --------------------------------------------------------------------------
// d-selection packing
// --------------------------------------------------------------------------

namespace {

std::uint64_t candidate_count(PointIndex k, std::uint32_t d) {
  std::uint64_t total = 0;
  for (std::uint32_t m = 0; m <= d; ++m) {
    std::uint64_t binom = 1;
    bool overflow = false;
    for (std::uint32_t i = 1; i <= m; ++i) {
      if (binom > std::numeric_limits<std::uint64_t>::max() / (k - m + i)) {
        overflow = true;
        break;
      }
      binom = binom * (k - m + i) / i;
    }
    if (overflow || total > std::numeric_limits<std::uint64_t>::max() - binom) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += binom;
  }
  return total;
}

struct PackBuilder {
  std::uint32_t d;
  std::vector<std::vector<PointIndex>> kept;
  std::vector<std::vector<std::uint32_t>> by_atom;  // atom -> kept ids
  std::uint32_t min_kept_weight = std::numeric_limits<std::uint32_t>::max();

  explicit PackBuilder(PointIndex k, std::uint32_t d_) : d(d_), by_atom(k + 1) {}

  bool try_add(const std::vector<PointIndex>& cand) {
    // disjoint pairs have rho_H = |c| + |w|; a light kept vector blocks all
    // candidates below the weight gap
    if (min_kept_weight != std::numeric_limits<std::uint32_t>::max() &&
        min_kept_weight + cand.size() < d) {
      return false;
    }
    std::vector<std::uint32_t> seen;
    for (PointIndex a : cand) {
      for (std::uint32_t id : by_atom[a]) seen.push_back(id);
    }
    std::sort(seen.begin(), seen.end());
    std::uint32_t prev = std::numeric_limits<std::uint32_t>::max();
    std::uint32_t inter = 0;
    for (std::size_t i = 0; i <= seen.size(); ++i) {
      if (i < seen.size() && seen[i] == prev) {
        ++inter;
        continue;
      }
      if (prev != std::numeric_limits<std::uint32_t>::max()) {
        const std::size_t rho = cand.size() + kept[prev].size() - 2 * inter;
        if (rho < d) return false;
      }
      if (i < seen.size()) {
        prev = seen[i];
        inter = 1;
      }
    }
    const auto id = static_cast<std::uint32_t>(kept.size());
    kept.push_back(cand);
    for (PointIndex a : cand) by_atom[a].push_back(id);
    min_kept_weight = std::min(min_kept_weight, static_cast<std::uint32_t>(cand.size()));
    return true;
  }
};

}  // namespace

HammingCode d_selection_pack(PointIndex k, std::uint32_t d) {
  if (d < 1 || k < 1) throw std::invalid_argument("d_selection_pack: k, d >= 1");
  constexpr std::uint64_t kEnumerationLimit = 1000000;
  constexpr std::size_t kKeepLimit = 4096;
  constexpr std::size_t kSampleBudget = 300000;

  HammingCode code;
  code.k = k;
  code.d = d;
  PackBuilder builder(k, d);

  if (candidate_count(k, d) <= kEnumerationLimit) {
    // cardinality ascending, lexicographic: deterministic
    for (std::uint32_t m = 0; m <= d && m <= k && builder.kept.size() < kKeepLimit; ++m) {
      std::vector<PointIndex> idx(m);
      for (std::uint32_t i = 0; i < m; ++i) idx[i] = i + 1;
      while (builder.kept.size() < kKeepLimit) {
        builder.try_add(idx);
        if (m == 0) break;
        std::uint32_t i = m;
        while (i > 0 && idx[i - 1] == k - m + i) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::uint32_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  } else {
    // deterministic sampled stream of weight-d supports; duplicates are
    // rejected by the distance check
    Rng rng(Rng::mix(0x9acc5e1ec7104e57ull, k, d));
    std::vector<PointIndex> cand;
    for (std::size_t t = 0; t < kSampleBudget && builder.kept.size() < kKeepLimit; ++t) {
      cand.clear();
      while (cand.size() < d) {
        const auto a = static_cast<PointIndex>(rng.below(k) + 1);
        if (std::find(cand.begin(), cand.end(), a) == cand.end()) cand.push_back(a);
      }
      std::sort(cand.begin(), cand.end());
      builder.try_add(cand);
    }
  }

  code.supports = std::move(builder.kept);
  const double target = d / 4.0 * std::log(static_cast<double>(k) / (6.0 * d));
  code.meets_cardinality_bound =
      std::log(static_cast<double>(std::max<std::size_t>(code.supports.size(), 1))) >= target;
  return code;
}

// --------------------------------------------------------------------------
// World constructions
// --------------------------------------------------------------------------

namespace {

const HammingCode& cached_pack(PointIndex k, std::uint32_t d) {
  static std::mutex mu;
  static std::map<std::pair<PointIndex, std::uint32_t>, HammingCode> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({k, d});
  if (inserted) it->second = d_selection_pack(k, d);
  return it->second;
}

std::string omega_hex(const std::vector<std::uint8_t>& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bits.size() / 4 + 1);
  std::uint8_t nibble = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    nibble = static_cast<std::uint8_t>((nibble << 1) | (bits[i] & 1));
    if (i % 4 == 3) {
      out.push_back(digits[nibble]);
      nibble = 0;
    }
  }
  if (bits.size() % 4 != 0) {
    nibble = static_cast<std::uint8_t>(nibble << (4 - bits.size() % 4));
    out.push_back(digits[nibble]);
  }
  return out;
}

}  // namespace

World make_vc_world(std::size_t n, std::uint32_t d, Rng& rng) {
  if (n < d || d < 1) throw std::invalid_argument("make_vc_world: need n >= d >= 1");
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double alpha = dd / (16.0 * nd) * std::log(4.0 * nd / dd);
  const auto k = static_cast<PointIndex>(strict_ceil(dd / alpha));

  const HammingCode& pack = cached_pack(k, d);
  const std::vector<PointIndex>& support =
      pack.supports[rng.below(pack.supports.size())];

  World w;
  w.support_size = k;
  w.mu.assign(k, 1.0 / static_cast<double>(k));
  w.eta.assign(k, 0.5);
  w.omega.assign(k, 0);
  for (PointIndex a : support) {
    w.eta[a - 1] = 0.75;
    w.omega[a - 1] = 1;
  }
  w.ref_class = VcIndicator{0.75, d, k};

  std::ostringstream id;
  id << "vc(d=" << d << ";n=" << n << ";k=" << k << ")";
  w.id = id.str();
  std::ostringstream sj;
  sj << "{\"kind\":\"vc\",\"n\":" << n << ",\"d\":" << d << ",\"k\":" << k
     << ",\"omega\":\"" << omega_hex(w.omega) << "\"}";
  w.spec_json = sj.str();
  return finalize_world(std::move(w));
}

World make_hypercube_world(std::size_t n, double p, HypercubeVariant variant, Rng& rng) {
  if (p <= 0) throw std::invalid_argument("make_hypercube_world: p > 0 required");
  if (variant == HypercubeVariant::Regret && p < 2) {
    throw std::invalid_argument("make_hypercube_world: regret variant needs p >= 2");
  }
  const double nd = static_cast<double>(n);
  World w;
  PointIndex d;
  if (variant == HypercubeVariant::Risk) {
    d = static_cast<PointIndex>(strict_ceil(std::pow(nd, p / (2.0 + p))));
    const double amp = 0.25 * std::pow(static_cast<double>(d), -1.0 / p);
    w.support_size = d;
    w.mu.assign(d, 1.0 / static_cast<double>(d));
    w.eta.assign(d, 0.5);
    w.omega.assign(d, 0);
    for (PointIndex j = 0; j < d; ++j) {
      if (rng.bernoulli(0.5)) {
        w.omega[j] = 1;
        w.eta[j] = 0.5 + amp;
      }
    }
  } else {
    d = static_cast<PointIndex>(2 * strict_ceil(std::pow(nd, p / (p - 1.0))));
    w.support_size = d;
    w.mu.assign(d, 1.0 / static_cast<double>(d));
    w.eta.assign(d, 0.5);
    w.omega.assign(d, 0);
    for (PointIndex j = 0; j < d; ++j) {
      const bool up = rng.bernoulli(0.5);
      w.omega[j] = up ? 1 : 0;
      w.eta[j] = up ? 0.75 : 0.25;
    }
    const double gap = 0.25 * (1.0 - std::pow(static_cast<double>(d), -1.0 / p));
    w.pinned_inf_sq = gap * gap;
  }

  BoxSequence cls;
  cls.p = p;
  cls.truncation = d;
  cls.grid_step = 0.5 * std::pow(nd, -1.0 / (2.0 + p));
  cls.support_size = d;
  w.ref_class = cls;

  const char* name = variant == HypercubeVariant::Risk ? "hypercube-risk" : "hypercube-regret";
  std::ostringstream id;
  id << name << "(p=" << p << ";n=" << n << ";d=" << d << ")";
  w.id = id.str();
  std::ostringstream sj;
  sj << "{\"kind\":\"" << name << "\",\"n\":" << n << ",\"p\":" << format_double(p)
     << ",\"d\":" << d << ",\"omega\":\"" << omega_hex(w.omega) << "\"}";
  w.spec_json = sj.str();
  return finalize_world(std::move(w));
}

World make_delta_world(double p, double delta, const World& base) {
  (void)p;
  if (delta < 0 || delta > 1) throw std::invalid_argument("make_delta_world: delta in [0,1]");
  if (delta == 0) return base;

  auto dist_at = [&](double shift) {
    std::vector<double> eta(base.eta);
    for (double& e : eta) e = std::min(1.0, e + shift);
    return std::sqrt(class_inf_sq(base.ref_class, base.mu, eta));
  };
  const double max_dist = dist_at(1.0);
  if (delta > max_dist + 1e-9) {
    throw std::invalid_argument("make_delta_world: delta unreachable, maximum is " +
                                format_double(max_dist));
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dist_at(mid) < delta ? lo : hi) = mid;
  }
  const double shift = 0.5 * (lo + hi);

  World w = base;
  for (double& e : w.eta) e = std::min(1.0, e + shift);
  w.pinned_inf_sq.reset();
  w.id = base.id + "+delta(" + format_double(delta) + ")";
  w.spec_json = "{\"kind\":\"delta\",\"delta\":" + format_double(delta) +
                ",\"base\":" + (base.spec_json.empty() ? "null" : base.spec_json) + "}";
  w = finalize_world(std::move(w));
  if (std::abs(std::sqrt(w.inf_sq) - delta) > 1e-6) {
    throw std::runtime_error("make_delta_world: bisection failed to reach the target distance");
  }
  return w;
}

World make_finite_constants_world(std::uint32_t num_constants, PointIndex support,
                                  double eta_lo, double eta_hi, bool pin_best, Rng& rng) {
  if (num_constants < 1 || support < 1) {
    throw std::invalid_argument("make_finite_constants_world: need members and support");
  }
  World w;
  w.support_size = support;
  w.mu.assign(support, 1.0 / static_cast<double>(support));
  w.eta.resize(support);
  for (double& e : w.eta) e = rng.uniform(eta_lo, eta_hi);

  double mean = 0.0;
  for (double e : w.eta) mean += e;
  mean /= static_cast<double>(support);

  FiniteList fl;
  fl.members.reserve(num_constants);
  if (pin_best) fl.members.push_back(FlatFunction::constant(support, mean));
  while (fl.members.size() < num_constants) {
    fl.members.push_back(FlatFunction::constant(support, rng.next_unit()));
  }
  w.ref_class = std::move(fl);

  std::ostringstream id;
  id << "finite(M=" << num_constants << ";k=" << support << ")";
  w.id = id.str();
  w.spec_json = "{\"kind\":\"finite\",\"M\":" + std::to_string(num_constants) + "}";
  return finalize_world(std::move(w));
}

World make_finite_gap_world(std::size_t n) {
  World w;
  w.support_size = 1;
  w.mu = {1.0};
  // constants {0, 1} with eta just below 1/2: the risk gap is exactly
  // n^{-1/2} and the selection decision reduces to "is the label mean above
  // 1/2", so the wrong-pick probability stays constant in n
  const double gap = 1.0 / std::sqrt(static_cast<double>(n));
  w.eta = {(1.0 - gap) / 2.0};
  FiniteList fl;
  fl.members.push_back(FlatFunction::constant(1, 0.0));
  fl.members.push_back(FlatFunction::constant(1, 1.0));
  w.ref_class = std::move(fl);
  w.id = "finite-gap(n=" + std::to_string(n) + ")";
  w.spec_json = "{\"kind\":\"finite-gap\",\"n\":" + std::to_string(n) + "}";
  return finalize_world(std::move(w));
}

World make_dictionary_world(std::uint32_t dict_size, std::uint32_t sparsity,
                            PointIndex support, Rng& rng) {
  if (dict_size < 2 || sparsity < 1 || sparsity > dict_size) {
    throw std::invalid_argument("make_dictionary_world: need M >= 2 and 1 <= s <= M");
  }
  if (support < 8) throw std::invalid_argument("make_dictionary_world: support too small");
  const PointIndex shared_block = support - support / 5;  // last fifth carries the offset

  DictionaryHull hull;
  hull.sparsity = sparsity;
  hull.dictionary.reserve(dict_size);
  std::vector<std::vector<double>> vals(dict_size, std::vector<double>(support, 0.5));
  for (std::uint32_t j = 0; j < dict_size; ++j) {
    for (PointIndex a = 0; a < shared_block; ++a) vals[j][a] = rng.uniform(0.3, 0.7);
    hull.dictionary.push_back(FlatFunction::from_dense(vals[j]));
  }

  World w;
  w.support_size = support;
  w.mu.assign(support, 1.0 / static_cast<double>(support));
  w.eta.resize(support);
  // population optimum at the midpoint of the first two elements; the offset
  // lives on the shared block where every dictionary element equals 1/2, so
  // no hull point can reduce it
  const double offset = 0.3;
  for (PointIndex a = 0; a < support; ++a) {
    if (a < shared_block) {
      w.eta[a] = 0.5 * (vals[0][a] + vals[1][a]);
    } else {
      w.eta[a] = rng.bernoulli(0.5) ? 0.5 + offset : 0.5 - offset;
    }
  }
  w.ref_class = std::move(hull);
  std::ostringstream id;
  id << "dictionary(M=" << dict_size << ";s=" << sparsity << ")";
  w.id = id.str();
  w.spec_json = "{\"kind\":\"dictionary\",\"M\":" + std::to_string(dict_size) +
                ",\"s\":" + std::to_string(sparsity) + "}";
  return finalize_world(std::move(w));
}

}  // namespace aol
