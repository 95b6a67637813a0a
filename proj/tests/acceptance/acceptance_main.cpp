// Acceptance suite: one test case per criterion, each printing a pass/fail
// line with the measured quantities next to its thresholds.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aol/bounds.hpp"
#include "aol/harness.hpp"

using namespace aol;
using namespace aol::harness;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report_line(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

const SlopeSummary& summary_of(const RiskReport& rep, const std::string& name) {
  for (const SlopeSummary& s : rep.summaries) {
    if (s.estimator == name) return s;
  }
  throw std::runtime_error("no summary for " + name);
}

constexpr std::uint64_t kSeed = 42;

}  // namespace

TEST_CASE("criterion 1: structural property suite") {
  const auto t0 = Clock::now();
  const auto checks = structural_checks(kSeed);
  bool pass = true;
  std::string failed;
  for (const CheckResult& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.passed);
    if (!c.passed) {
      pass = false;
      failed += " [" + c.name + "]";
    }
  }
  const double secs = seconds_since(t0);
  CHECK(secs < 30.0);
  std::ostringstream detail;
  detail << checks.size() << " structural checks" << failed << ", " << secs << " s (limit 30 s)";
  report_line(1, pass && secs < 30.0, detail.str());
}

TEST_CASE("criterion 2: sharp aggregation rate on a finite class") {
  const auto t0 = Clock::now();

  ExperimentConfig cfg;
  cfg.world.kind = "finite";  // 16 random constants, mid-range eta, misspecified
  cfg.estimators.resize(2);
  cfg.estimators[0].name = "aol";
  cfg.estimators[0].epsilon = {EpsilonRule::Kind::Vc, 2.0, 0.1};
  cfg.estimators[0].target_exponent = -1.0;
  cfg.estimators[1].name = "skeleton";
  cfg.estimators[1].epsilon = {EpsilonRule::Kind::Vc, 2.0, 0.1};
  cfg.estimators[1].target_exponent = -1.0;
  cfg.n_grid = {256, 512, 1024, 2048, 4096, 8192};
  cfg.replications = 200;
  cfg.base_seed = kSeed;
  const RiskReport finite = run_experiment(cfg);

  ExperimentConfig gap_cfg;
  gap_cfg.world.kind = "finite-gap";  // risk gap n^{-1/2} between two constants
  gap_cfg.estimators.resize(1);
  gap_cfg.estimators[0].name = "erm";
  gap_cfg.estimators[0].target_exponent = -0.5;
  gap_cfg.n_grid = cfg.n_grid;
  gap_cfg.replications = 200;
  gap_cfg.base_seed = kSeed;
  const RiskReport gap = run_experiment(gap_cfg);

  const double aol_slope = summary_of(finite, "aol").slope;
  const double skel_slope = summary_of(finite, "skeleton").slope;
  const double erm_slope = summary_of(gap, "erm").slope;
  const double secs = seconds_since(t0);

  CHECK(finite.failures == 0);
  CHECK(gap.failures == 0);
  CHECK(aol_slope == doctest::Approx(-1.0).epsilon(0.2));
  CHECK(skel_slope == doctest::Approx(-1.0).epsilon(0.2));
  CHECK(erm_slope == doctest::Approx(-0.5).epsilon(0.3));
  CHECK(secs < 120.0);

  const bool pass = std::abs(aol_slope + 1.0) <= 0.2 && std::abs(skel_slope + 1.0) <= 0.2 &&
                    std::abs(erm_slope + 0.5) <= 0.15 && secs < 120.0;
  std::ostringstream detail;
  detail << "aol " << aol_slope << " / skeleton " << skel_slope << " (target -1 +- 0.2), erm "
         << erm_slope << " (target -0.5 +- 0.15), " << secs << " s (limit 120 s)";
  CHECK(std::abs(erm_slope + 0.5) <= 0.15);
  report_line(2, pass, detail.str());
}

TEST_CASE("criterion 3: nonparametric rate at p = 2") {
  const auto t0 = Clock::now();

  ExperimentConfig cfg;
  cfg.world.kind = "hypercube-risk";
  cfg.world.p = 2.0;
  cfg.estimators.resize(1);
  cfg.estimators[0].name = "aol";
  cfg.estimators[0].epsilon = {EpsilonRule::Kind::Poly, 2.0, 0.1};  // epsilon = n^{-1/4}
  cfg.estimators[0].proxy_members = 32;
  cfg.estimators[0].proxy_box_members = 0;
  cfg.estimators[0].proxy_ones_frac = 0.02;
  cfg.estimators[0].target_exponent = -0.5;
  cfg.n_grid = {256, 512, 1024, 2048, 4096, 8192};
  cfg.replications = 100;
  cfg.base_seed = kSeed;
  const RiskReport rep = run_experiment(cfg);

  const double slope = summary_of(rep, "aol").slope;
  const double secs = seconds_since(t0);
  CHECK(rep.failures == 0);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.3));
  CHECK(std::abs(slope + 0.5) <= 0.15);
  CHECK(secs < 600.0);

  std::ostringstream detail;
  detail << "aol slope " << slope << " (target -0.5 +- 0.15), " << secs << " s (limit 600 s)";
  report_line(3, std::abs(slope + 0.5) <= 0.15 && secs < 600.0, detail.str());
}

TEST_CASE("criterion 4: vc regime at d = 3") {
  const auto t0 = Clock::now();

  ExperimentConfig cfg;
  cfg.world.kind = "vc";
  cfg.world.vc_dim = 3;
  cfg.estimators.resize(1);
  cfg.estimators[0].name = "aol";
  cfg.estimators[0].epsilon = {EpsilonRule::Kind::Vc, 2.0, 0.1};  // epsilon = n^{-1/2}
  cfg.estimators[0].proxy_cap = 2048;
  cfg.estimators[0].target_exponent = -1.0;
  cfg.n_grid = {64, 128, 256, 512, 1024, 2048};
  cfg.replications = 60;
  cfg.base_seed = kSeed;
  const RiskReport rep = run_experiment(cfg);

  const double slope = summary_of(rep, "aol").slope;
  const double secs = seconds_since(t0);
  CHECK(rep.failures == 0);
  CHECK(slope <= -0.75);
  CHECK(slope >= -1.15);
  CHECK(secs < 300.0);

  std::ostringstream detail;
  detail << "aol slope " << slope << " (window [-1.15, -0.75]), " << secs << " s (limit 300 s)";
  report_line(4, slope <= -0.75 && slope >= -1.15 && secs < 300.0, detail.str());
}

TEST_CASE("criterion 5: regret lower-bound floor at p = 2") {
  const auto t0 = Clock::now();

  ExperimentConfig cfg;
  cfg.world.kind = "hypercube-regret";
  cfg.world.p = 2.0;
  cfg.estimators.resize(4);
  cfg.estimators[0].name = "aol";
  cfg.estimators[0].epsilon = {EpsilonRule::Kind::Poly, 2.0, 0.1};
  cfg.estimators[1].name = "skeleton";
  cfg.estimators[1].epsilon = {EpsilonRule::Kind::Poly, 2.0, 0.1};
  cfg.estimators[2].name = "erm";
  cfg.estimators[3].name = "sparse-convex";
  cfg.estimators[3].dict_size = 12;
  cfg.estimators[3].sparsity = 2;
  cfg.n_grid = {16, 32, 64, 128, 256, 512};
  cfg.replications = 200;
  cfg.base_seed = kSeed;
  const RiskReport rep = run_experiment(cfg);

  bool floor_ok = true, slope_ok = true;
  std::ostringstream detail;
  for (const SlopeSummary& s : rep.summaries) {
    for (const auto& [n, mean] : s.means) {
      const double floor = 0.01 / static_cast<double>(n);  // 0.01 n^{-1/(p-1)}
      if (mean < floor) floor_ok = false;
      CHECK(mean >= floor);
    }
    CHECK(s.slope >= -1.2);
    if (s.slope < -1.2) slope_ok = false;
    detail << s.estimator << " " << s.slope << " ";
  }
  const double secs = seconds_since(t0);
  CHECK(rep.failures == 0);
  CHECK(secs < 180.0);
  detail << "(all means above 0.01/n: " << (floor_ok ? "yes" : "no") << "), " << secs
         << " s (limit 180 s)";
  report_line(5, floor_ok && slope_ok && secs < 180.0, detail.str());
}

TEST_CASE("criterion 6: sparse convex aggregation against psi") {
  const auto t0 = Clock::now();
  const std::size_t ns[] = {512, 2048, 8192};
  const int R = 100;

  bool psi_ok = true, stage_ok = true;
  std::ostringstream detail;
  for (std::size_t n : ns) {
    double sum_final = 0, sum_sparse = 0, sum_hull = 0;
    for (int rep = 0; rep < R; ++rep) {
      Rng rng(derive_seed(kSeed, "sparse-convex-acceptance", n, rep));
      const World world = make_dictionary_world(20, 2, 40, rng);
      const Dataset data = sample_world(world, 3 * n, rng);
      const auto& hull = std::get<DictionaryHull>(world.ref_class);
      const FitRecord fit = sparse_convex_fit(hull, data, AggregatorSpec{}, 1e-6);
      sum_final += excess_risk(world, fit.predictor);
      sum_sparse += excess_risk(world, fit.stage_predictors[0]);
      sum_hull += excess_risk(world, fit.stage_predictors[1]);
    }
    const double mean_final = sum_final / R;
    const double best_stage = std::min(sum_sparse, sum_hull) / R;
    const double bound = 5.0 * bounds::psi_nms(n, 20, 2);
    CHECK(mean_final <= bound);
    CHECK(mean_final <= 1.5 * best_stage);
    if (mean_final > bound) psi_ok = false;
    if (mean_final > 1.5 * best_stage) stage_ok = false;
    detail << "n=" << n << " mean " << mean_final << " vs 5psi " << bound << " (stage best "
           << best_stage << "); ";
  }
  const double secs = seconds_since(t0);
  CHECK(secs < 300.0);
  detail << secs << " s (limit 300 s)";
  report_line(6, psi_ok && stage_ok && secs < 300.0, detail.str());
}

TEST_CASE("criterion 7: bound calculators") {
  using namespace aol::bounds;
  bool pass = true;

  const double psi = psi_nms(100, 10, 1);
  CHECK(psi == doctest::Approx(0.0330259).epsilon(1e-6 / 0.0330259));
  pass = pass && std::abs(psi - 0.0330259) <= 1e-6;

  const double bp_lo = barpsi(4096, 4.0, 0.0);
  const double bp_hi = barpsi(4096, 4.0, 1.0);
  CHECK(bp_lo == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(bp_hi == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
  pass = pass && std::abs(bp_lo - 0.0625) <= 1e-12 && std::abs(bp_hi - 0.125) <= 1e-12;

  // 144 log(8) / 1000 = 0.29943958...
  const double r_star = loc_radius(EntropyModel::finite(8), 1000);
  const double r_expected = 144.0 * std::log(8.0) / 1000.0;
  CHECK(r_star == doctest::Approx(r_expected).epsilon(1e-5 / r_expected));
  pass = pass && std::abs(r_star - r_expected) <= 1e-5;

  double max_jump = 0.0;
  for (double p : {2.5, 4.0, 6.0}) {
    const double lo = std::pow(4096.0, -2.0 / (2.0 + p));
    const double hi = std::pow(4096.0, -1.0 / p);
    max_jump = std::max(max_jump,
                        std::abs(barpsi(4096, p, lo) - barpsi(4096, p, lo * (1 - 1e-13))));
    max_jump = std::max(max_jump,
                        std::abs(barpsi(4096, p, hi) - barpsi(4096, p, hi * (1 + 1e-13))));
  }
  CHECK(max_jump <= 1e-12);
  pass = pass && max_jump <= 1e-12;

  std::ostringstream detail;
  detail << "psi_nms(100,10,1)=" << psi << ", barpsi breakpoints " << bp_lo << "/" << bp_hi
         << ", loc_radius(finite M=8, n=1000)=" << r_star << ", barpsi max jump " << max_jump;
  report_line(7, pass, detail.str());
}

TEST_CASE("criterion 8: selftest determinism") {
  std::ostringstream out;
  const int rc = run_selftest(out);
  CHECK(rc == 0);
  const bool pass = rc == 0;
  std::string last;
  std::istringstream lines(out.str());
  std::string line, csv_line;
  while (std::getline(lines, line)) {
    if (line.find("identical csv bytes") != std::string::npos) csv_line = line;
  }
  report_line(8, pass, pass ? "selftest green; " + csv_line : out.str());
}
