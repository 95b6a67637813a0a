#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aol {

// Atom of the discrete design space, 1-based.
using PointIndex = std::uint32_t;

struct LabeledPair {
  PointIndex x = 0;
  double y = 0.0;  // in [0, 1]
};

struct Dataset {
  std::vector<LabeledPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

// Three consecutive equal blocks of a sample of size 3n.
struct ThreeWaySplit {
  Dataset s;        // net / partition sample
  Dataset s_prime;  // per-cell least squares sample
  Dataset s_dprime; // aggregation sample
};

ThreeWaySplit split_threeway(const Dataset& d);

// A function on {1..support_size} stored as a baseline value plus sparse
// deviations. Constants cost O(1), indicator-style functions O(#deviations),
// dense tables O(support_size). All public operations work through this form.
struct FlatFunction {
  PointIndex support_size = 0;
  double baseline = 0.0;
  std::vector<std::pair<PointIndex, double>> devs;  // sorted by atom, absolute values

  double value_at(PointIndex x) const;  // no bounds check

  static FlatFunction constant(PointIndex support, double v);
  static FlatFunction from_dense(const std::vector<double>& values);
  // Indicator-style member: `value` on the given atoms, `baseline` elsewhere.
  static FlatFunction on_atoms(PointIndex support, double baseline,
                               std::vector<PointIndex> atoms, double value);

  bool operator==(const FlatFunction&) const = default;
};

// Either a single class member or a finite mixture with simplex weights.
// Mixtures are flattened eagerly so that evaluation and risk computations
// never recurse.
class Predictor {
 public:
  Predictor() = default;

  static Predictor member(FlatFunction f);
  static Predictor mixture(std::vector<Predictor> components, std::vector<double> weights);

  const FlatFunction& flat() const { return flat_; }
  bool is_mixture() const { return !components_.empty(); }
  const std::vector<Predictor>& components() const { return components_; }
  const std::vector<double>& weights() const { return weights_; }
  PointIndex support_size() const { return flat_.support_size; }

  friend bool operator==(const Predictor& a, const Predictor& b) {
    return a.flat_ == b.flat_;
  }

 private:
  FlatFunction flat_;
  std::vector<Predictor> components_;
  std::vector<double> weights_;
};

// Bounds-checked evaluation; out-of-support atoms raise "unknown design point".
double evaluate(const Predictor& pred, PointIndex x);
double evaluate(const FlatFunction& f, PointIndex x);

// ---------------------------------------------------------------------------
// Function class descriptions
// ---------------------------------------------------------------------------

struct FiniteList {
  std::vector<FlatFunction> members;
};

// Discretization of the coordinate box family { f : f_j = (1+g_j)/2,
// |g_j| <= j^{-1/p} } with coordinates truncated at `truncation` and g_j
// restricted to multiples of grid_step; f_j = 1/2 beyond the truncation.
struct BoxSequence {
  double p = 2.0;
  PointIndex truncation = 1;
  double grid_step = 1.0;
  PointIndex support_size = 0;  // atoms the members live on; >= truncation
};

// { a * 1{x in W} : |W| <= d, W subset of {1..universe} }
struct VcIndicator {
  double amplitude = 0.75;  // in (0, 1]
  PointIndex d = 1;
  PointIndex universe = 1;
};

// s-sparse convex combinations of a fixed dictionary.
struct DictionaryHull {
  std::vector<FlatFunction> dictionary;
  std::uint32_t sparsity = 1;  // 1 <= s <= M
};

using FunctionSpec = std::variant<FiniteList, BoxSequence, VcIndicator, DictionaryHull>;

PointIndex spec_support_size(const FunctionSpec& spec);

// Number of members an enumeration would produce; nullopt when the class is
// not enumerable (DictionaryHull) or the count overflows 64 bits.
std::optional<std::uint64_t> count_members(const FunctionSpec& spec);

// Deterministic lexicographic enumeration. Throws when the count exceeds the
// budget (the message carries the exact count) or the class is not enumerable.
std::vector<Predictor> enumerate_members(const FunctionSpec& spec, std::uint64_t budget);

// Supports over an explicit atom subset, cardinality ascending then
// lexicographic; shared by VcIndicator enumeration and the harness proxies.
std::vector<Predictor> enumerate_indicator_supports(PointIndex support,
                                                    double amplitude,
                                                    std::uint32_t max_ones,
                                                    const std::vector<PointIndex>& atoms,
                                                    std::uint64_t budget);

}  // namespace aol
