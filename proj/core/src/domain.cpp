#include "aol/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace aol {

ThreeWaySplit split_threeway(const Dataset& d) {
  if (d.size() == 0 || d.size() % 3 != 0) {
    throw std::invalid_argument("split_threeway: sample size must be a positive multiple of 3");
  }
  const std::size_t n = d.size() / 3;
  ThreeWaySplit out;
  out.s.pairs.assign(d.pairs.begin(), d.pairs.begin() + n);
  out.s_prime.pairs.assign(d.pairs.begin() + n, d.pairs.begin() + 2 * n);
  out.s_dprime.pairs.assign(d.pairs.begin() + 2 * n, d.pairs.end());
  return out;
}

double FlatFunction::value_at(PointIndex x) const {
  auto it = std::lower_bound(devs.begin(), devs.end(), x,
                             [](const auto& dv, PointIndex key) { return dv.first < key; });
  if (it != devs.end() && it->first == x) return it->second;
  return baseline;
}

FlatFunction FlatFunction::constant(PointIndex support, double v) {
  FlatFunction f;
  f.support_size = support;
  f.baseline = v;
  return f;
}

FlatFunction FlatFunction::from_dense(const std::vector<double>& values) {
  FlatFunction f;
  f.support_size = static_cast<PointIndex>(values.size());
  f.baseline = 0.0;
  f.devs.reserve(values.size());
  for (PointIndex a = 1; a <= f.support_size; ++a) {
    if (values[a - 1] != 0.0) f.devs.emplace_back(a, values[a - 1]);
  }
  return f;
}

FlatFunction FlatFunction::on_atoms(PointIndex support, double baseline,
                                    std::vector<PointIndex> atoms, double value) {
  FlatFunction f;
  f.support_size = support;
  f.baseline = baseline;
  std::sort(atoms.begin(), atoms.end());
  f.devs.reserve(atoms.size());
  for (PointIndex a : atoms) f.devs.emplace_back(a, value);
  return f;
}

Predictor Predictor::member(FlatFunction f) {
  Predictor p;
  p.flat_ = std::move(f);
  return p;
}

Predictor Predictor::mixture(std::vector<Predictor> components, std::vector<double> weights) {
  if (components.empty()) throw std::invalid_argument("mixture: no components");
  if (components.size() != weights.size()) {
    throw std::invalid_argument("mixture: component/weight size mismatch");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw std::invalid_argument("mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture: weights must sum to 1");
  }

  Predictor p;
  const PointIndex support = components.front().support_size();
  for (const Predictor& c : components) {
    if (c.support_size() != support) {
      throw std::invalid_argument("mixture: components defined on different supports");
    }
  }

  FlatFunction flat;
  flat.support_size = support;
  flat.baseline = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    flat.baseline += weights[i] * components[i].flat().baseline;
  }
  // union of deviation atoms
  std::vector<PointIndex> atoms;
  for (const Predictor& c : components) {
    for (const auto& dv : c.flat().devs) atoms.push_back(dv.first);
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  flat.devs.reserve(atoms.size());
  for (PointIndex a : atoms) {
    double v = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
      v += weights[i] * components[i].flat().value_at(a);
    }
    flat.devs.emplace_back(a, v);
  }

  p.flat_ = std::move(flat);
  p.components_ = std::move(components);
  p.weights_ = std::move(weights);
  return p;
}

double evaluate(const FlatFunction& f, PointIndex x) {
  if (x < 1 || x > f.support_size) throw std::out_of_range("unknown design point");
  return f.value_at(x);
}

double evaluate(const Predictor& pred, PointIndex x) { return evaluate(pred.flat(), x); }

PointIndex spec_support_size(const FunctionSpec& spec) {
  return std::visit(
      [](const auto& s) -> PointIndex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteList>) {
          return s.members.empty() ? 0 : s.members.front().support_size;
        } else if constexpr (std::is_same_v<T, BoxSequence>) {
          return std::max(s.support_size, s.truncation);
        } else if constexpr (std::is_same_v<T, VcIndicator>) {
          return s.universe;
        } else {
          return s.dictionary.empty() ? 0 : s.dictionary.front().support_size;
        }
      },
      spec);
}

namespace {

// grid values for coordinate j of a BoxSequence: multiples of grid_step in
// [-j^{-1/p}, j^{-1/p}]; always contains 0
std::vector<double> box_grid(const BoxSequence& b, PointIndex j) {
  const double half = std::pow(static_cast<double>(j), -1.0 / b.p);
  const auto steps = static_cast<long>(std::floor(half / b.grid_step + 1e-12));
  std::vector<double> g;
  g.reserve(2 * steps + 1);
  for (long m = -steps; m <= steps; ++m) g.push_back(static_cast<double>(m) * b.grid_step);
  return g;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a + b;
}

std::uint64_t binom_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / (n - k + i)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * (n - k + i) / i;
  }
  return r;
}

[[noreturn]] void throw_budget(std::uint64_t required, std::uint64_t budget) {
  char msg[160];
  std::snprintf(msg, sizeof(msg),
                "enumerate_members: class requires %llu members, budget is %llu",
                static_cast<unsigned long long>(required),
                static_cast<unsigned long long>(budget));
  throw std::length_error(msg);
}

}  // namespace

std::optional<std::uint64_t> count_members(const FunctionSpec& spec) {
  if (std::holds_alternative<DictionaryHull>(spec)) return std::nullopt;
  if (const auto* fl = std::get_if<FiniteList>(&spec)) return fl->members.size();
  if (const auto* vc = std::get_if<VcIndicator>(&spec)) {
    std::uint64_t total = 0;
    for (std::uint32_t m = 0; m <= vc->d; ++m) {
      total = saturating_add(total, binom_saturating(vc->universe, m));
      if (total == std::numeric_limits<std::uint64_t>::max()) return total;
    }
    return total;
  }
  const auto& b = std::get<BoxSequence>(spec);
  if (b.p <= 0 || b.grid_step <= 0) throw std::invalid_argument("BoxSequence: p and grid_step must be positive");
  std::uint64_t total = 1;
  for (PointIndex j = 1; j <= b.truncation; ++j) {
    const double half = std::pow(static_cast<double>(j), -1.0 / b.p);
    const auto steps = static_cast<std::uint64_t>(std::floor(half / b.grid_step + 1e-12));
    total = saturating_mul(total, 2 * steps + 1);
    if (total == std::numeric_limits<std::uint64_t>::max()) return total;
  }
  return total;
}

std::vector<Predictor> enumerate_indicator_supports(PointIndex support, double amplitude,
                                                    std::uint32_t max_ones,
                                                    const std::vector<PointIndex>& atoms,
                                                    std::uint64_t budget) {
  std::uint64_t total = 0;
  for (std::uint32_t m = 0; m <= max_ones && m <= atoms.size(); ++m) {
    total = saturating_add(total, binom_saturating(atoms.size(), m));
  }
  if (total > budget) throw_budget(total, budget);

  std::vector<Predictor> out;
  out.reserve(total);
  std::vector<PointIndex> current;
  // cardinality ascending, lexicographic within each cardinality
  for (std::uint32_t m = 0; m <= max_ones && m <= atoms.size(); ++m) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      current.clear();
      for (std::size_t i : idx) current.push_back(atoms[i]);
      out.push_back(Predictor::member(
          FlatFunction::on_atoms(support, 0.0, current, amplitude)));
      if (m == 0) break;
      // next combination
      std::size_t i = m;
      while (i > 0 && idx[i - 1] == atoms.size() - m + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::vector<Predictor> enumerate_members(const FunctionSpec& spec, std::uint64_t budget) {
  if (std::holds_alternative<DictionaryHull>(spec)) {
    throw std::invalid_argument("enumerate_members: dictionary hulls are not enumerable; use the simplex solver");
  }

  if (const auto* fl = std::get_if<FiniteList>(&spec)) {
    if (fl->members.size() > budget) throw_budget(fl->members.size(), budget);
    std::vector<Predictor> out;
    out.reserve(fl->members.size());
    for (const FlatFunction& f : fl->members) out.push_back(Predictor::member(f));
    return out;
  }

  if (const auto* vc = std::get_if<VcIndicator>(&spec)) {
    std::vector<PointIndex> atoms(vc->universe);
    for (PointIndex a = 1; a <= vc->universe; ++a) atoms[a - 1] = a;
    return enumerate_indicator_supports(vc->universe, vc->amplitude, vc->d, atoms, budget);
  }

  const auto& b = std::get<BoxSequence>(spec);
  const auto count = count_members(spec);
  if (!count || *count > budget) throw_budget(count.value_or(0), budget);
  const PointIndex support = spec_support_size(spec);

  std::vector<std::vector<double>> grids(b.truncation);
  for (PointIndex j = 1; j <= b.truncation; ++j) grids[j - 1] = box_grid(b, j);

  std::vector<Predictor> out;
  out.reserve(*count);
  std::vector<std::size_t> pos(b.truncation, 0);
  while (true) {
    FlatFunction f;
    f.support_size = support;
    f.baseline = 0.5;
    for (PointIndex j = 1; j <= b.truncation; ++j) {
      const double g = grids[j - 1][pos[j - 1]];
      if (g != 0.0) f.devs.emplace_back(j, (1.0 + g) / 2.0);
    }
    out.push_back(Predictor::member(std::move(f)));
    // odometer increment, last coordinate fastest
    PointIndex j = b.truncation;
    while (j > 0) {
      if (++pos[j - 1] < grids[j - 1].size()) break;
      pos[j - 1] = 0;
      --j;
    }
    if (j == 0) break;
  }
  return out;
}

}  // namespace aol
