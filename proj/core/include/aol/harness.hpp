#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aol/estimators.hpp"
#include "aol/worlds.hpp"

namespace aol::harness {

struct WorldConfig {
  std::string kind = "finite";  // finite | finite-gap | box-sequence | vc |
                                // hypercube-risk | hypercube-regret | delta | dictionary
  double p = 2.0;
  std::uint32_t vc_dim = 3;
  double delta = 0.1;
  // finite
  std::uint32_t num_constants = 16;
  PointIndex support_size = 8;
  double eta_lo = 0.3, eta_hi = 0.7;
  bool pin_best_constant = true;
  // dictionary
  std::uint32_t dict_size = 20;
  std::uint32_t sparsity = 2;
  // box-sequence
  PointIndex truncation = 4;
  double grid_step = 0.25;
};

struct EstimatorConfig {
  std::string name = "aol";  // aol | skeleton | erm | sparse-convex
  std::string label;         // defaults to name; feeds the seed stream
  EpsilonRule epsilon;
  AggregatorSpec aggregator;
  std::uint64_t member_budget = 65536;
  // class stand-ins when full enumeration exceeds the budget
  std::uint32_t proxy_cap = 2048;         // indicator-class support patterns
  std::uint32_t proxy_members = 32;       // amplitude-scale box members
  std::uint32_t proxy_box_members = 0;    // spread box members
  double proxy_ones_frac = 0.02;          // elevated-atom share per box member
  // sparse-convex
  std::uint32_t dict_size = 20;
  std::uint32_t sparsity = 2;
  double tol = 1e-6;
  std::optional<double> target_exponent;
};

struct ExperimentConfig {
  WorldConfig world;
  std::vector<EstimatorConfig> estimators;
  std::vector<std::size_t> n_grid;
  std::uint32_t replications = 100;
  std::uint64_t base_seed = 20260808;
  std::uint32_t jobs = 1;
};

struct RiskRow {
  std::string world_id;
  std::string estimator;
  std::size_t n = 0;
  std::uint32_t rep = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::uint32_t n_cells = 0;
  double excess_risk = 0.0;
  double fit_wall_ms = 0.0;
  bool failed = false;
  std::string error;
};

struct SlopeSummary {
  std::string estimator;
  double slope = 0.0;
  double slope_stderr = 0.0;
  bool slope_valid = false;
  std::optional<double> target;
  std::vector<std::pair<std::size_t, double>> means;
  std::vector<std::pair<std::size_t, double>> medians;
};

struct RiskReport {
  ExperimentConfig config;
  std::vector<RiskRow> rows;
  std::vector<SlopeSummary> summaries;
  std::uint32_t failures = 0;
  // replay record (kind + parameters + construction pattern) of the first
  // replication's world
  std::string world_spec_example;
};

// Derives one seed per (estimator label, n, rep); adding estimators or grid
// points never perturbs other rows' draws.
std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& label, std::size_t n,
                          std::uint32_t rep);

World build_world(const WorldConfig& wc, std::size_t n, Rng& rng);

// Candidate list an estimator runs over. Enumerates the reference class when
// it fits the budget; otherwise draws a deterministic within-budget stand-in
// from the class (support patterns over the most frequent sample atoms for
// indicator classes, amplitude-scale and grid-spread members for box
// classes).
std::vector<Predictor> build_candidates(const World& world, const EstimatorConfig& ec,
                                        const Dataset& data, Rng& rng);

RiskRow run_single(const WorldConfig& wc, const EstimatorConfig& ec, std::size_t n,
                   std::uint32_t rep, std::uint64_t base_seed);

RiskReport run_experiment(const ExperimentConfig& cfg);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::size_t points_used = 0;
};

// OLS of log(mean) on log(n); non-positive means are dropped, fewer than
// three surviving points is an error.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points);

std::string render_rows_csv(const RiskReport& report, bool zero_wall = false);
std::string render_summary_json(const RiskReport& report);
std::string render_rates_svg(const RiskReport& report);

std::vector<RiskRow> parse_rows_csv(const std::string& text);

// Measured slopes next to the rate exponents for the aggregation-of-leaders /
// skeleton / global ERM comparison; missing cells render as em-dashes.
std::string table1_report(const std::vector<RiskReport>& reports);

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

// name, passed, detail
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Structural property battery: net covering/properness/separation, partition
// laws, star-aggregate exactness, simplex-solver monotonicity and gap against
// a brute-force grid, exact risk against Monte Carlo.
std::vector<CheckResult> structural_checks(std::uint64_t seed);

// Structural battery plus a doubled miniature rate run whose canonical CSV
// bytes must agree. Returns 0 on success.
int run_selftest(std::ostream& out);

int write_outputs(const RiskReport& report, const std::string& out_dir, bool zero_wall = false);

}  // namespace aol::harness
