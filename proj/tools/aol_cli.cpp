#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aol/bounds.hpp"
#include "aol/harness.hpp"

namespace {

using nlohmann::ordered_json;

int cmd_run(const std::string& config_path, const std::string& out_dir, unsigned jobs,
            std::uint64_t seed, bool has_jobs, bool has_seed) {
  aol::harness::ExperimentConfig cfg;
  try {
    cfg = aol::harness::config_from_json_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (has_jobs) cfg.jobs = jobs;
  if (has_seed) cfg.base_seed = seed;

  const aol::harness::RiskReport report = aol::harness::run_experiment(cfg);
  const int rc = aol::harness::write_outputs(report, out_dir);
  std::cout << "wrote " << report.rows.size() << " rows to " << out_dir << "/rows.csv";
  if (report.failures > 0) std::cout << " (" << report.failures << " rows failed)";
  std::cout << "\n";
  for (const auto& s : report.summaries) {
    std::cout << "  " << s.estimator << ": ";
    if (s.slope_valid) {
      std::cout << "slope " << s.slope << " (stderr " << s.slope_stderr << ")";
    } else {
      std::cout << "slope unavailable";
    }
    if (s.target) std::cout << ", target " << *s.target;
    std::cout << "\n";
  }
  return rc;
}

aol::harness::RiskReport load_report(const std::string& dir) {
  std::ifstream rows_file(std::filesystem::path(dir) / "rows.csv", std::ios::binary);
  if (!rows_file) throw std::invalid_argument("cannot open " + dir + "/rows.csv");
  std::stringstream ss;
  ss << rows_file.rdbuf();

  aol::harness::RiskReport report;
  report.rows = aol::harness::parse_rows_csv(ss.str());

  // regroup: estimator -> n -> excesses
  std::vector<std::string> estimators;
  for (const auto& r : report.rows) {
    if (std::find(estimators.begin(), estimators.end(), r.estimator) == estimators.end()) {
      estimators.push_back(r.estimator);
    }
    if (std::find(report.config.n_grid.begin(), report.config.n_grid.end(), r.n) ==
        report.config.n_grid.end()) {
      report.config.n_grid.push_back(r.n);
    }
    if (r.failed) ++report.failures;
  }
  std::sort(report.config.n_grid.begin(), report.config.n_grid.end());

  // recover the world kind from the id prefix of the first row
  if (!report.rows.empty()) {
    const std::string& id = report.rows.front().world_id;
    report.config.world.kind = id.substr(0, id.find('('));
    const auto p_pos = id.find("p=");
    if (p_pos != std::string::npos) {
      report.config.world.p = std::stod(id.substr(p_pos + 2));
    }
  }

  for (const std::string& est : estimators) {
    aol::harness::SlopeSummary sum;
    sum.estimator = est;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n : report.config.n_grid) {
      std::vector<double> vals;
      for (const auto& r : report.rows) {
        if (r.estimator == est && r.n == n && !r.failed) vals.push_back(r.excess_risk);
      }
      if (vals.empty()) continue;
      double mean = 0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      sum.means.emplace_back(n, mean);
      pts.emplace_back(static_cast<double>(n), mean);
    }
    try {
      const auto sf = aol::harness::fit_slope(pts);
      sum.slope = sf.slope;
      sum.slope_stderr = sf.stderr_;
      sum.slope_valid = true;
    } catch (const std::exception&) {
    }
    report.summaries.push_back(std::move(sum));
  }
  return report;
}

int cmd_report(const std::vector<std::string>& dirs) {
  std::vector<aol::harness::RiskReport> reports;
  for (const std::string& dir : dirs) {
    try {
      reports.push_back(load_report(dir));
    } catch (const std::exception& e) {
      std::cerr << "report error: " << e.what() << "\n";
      return 2;
    }
  }
  for (const auto& rep : reports) {
    for (const auto& s : rep.summaries) {
      std::cout << rep.config.world.kind << " / " << s.estimator << ": ";
      if (s.slope_valid) {
        std::cout << "slope " << s.slope << " +- " << s.slope_stderr;
      } else {
        std::cout << "slope unavailable";
      }
      std::cout << ", means:";
      for (const auto& [n, m] : s.means) std::cout << " (" << n << ", " << m << ")";
      std::cout << "\n";
    }
  }
  std::cout << "\n" << aol::harness::table1_report(reports);
  return 0;
}

double get_req(const ordered_json& j, const std::string& key) {
  if (!j.contains(key)) throw std::invalid_argument("bounds query: missing field '" + key + "'");
  return j.at(key).get<double>();
}

ordered_json eval_bounds_query(const ordered_json& q) {
  const std::string op = q.at("op").get<std::string>();
  ordered_json out;
  out["op"] = op;
  using namespace aol::bounds;

  auto model_of = [&](const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "poly") return EntropyModel::poly(get_req(j, "A"), get_req(j, "p"));
    if (kind == "vc") return EntropyModel::vc(get_req(j, "A"), get_req(j, "v"));
    if (kind == "finite") return EntropyModel::finite(get_req(j, "M"));
    throw std::invalid_argument("bounds query: unknown model kind '" + kind + "'");
  };

  if (op == "psi_nms") {
    out["value"] = psi_nms(static_cast<std::size_t>(get_req(q, "n")),
                           static_cast<std::size_t>(get_req(q, "M")),
                           static_cast<std::size_t>(get_req(q, "s")));
  } else if (op == "tilde_psi") {
    out["value"] = tilde_psi(static_cast<std::size_t>(get_req(q, "m")),
                             static_cast<std::size_t>(get_req(q, "n")));
  } else if (op == "barpsi") {
    out["value"] = barpsi(static_cast<std::size_t>(get_req(q, "n")), get_req(q, "p"),
                          get_req(q, "delta_sq"));
  } else if (op == "rate_exponent") {
    out["value"] = rate_exponent(q.at("setting").get<std::string>(), q.value("p", 2.0));
  } else if (op == "loc_radius") {
    if (q.contains("rad")) {
      out["value"] = loc_radius_from_rad(get_req(q, "rad"),
                                         static_cast<std::size_t>(get_req(q, "n")));
    } else {
      out["value"] = loc_radius(model_of(q.at("model")),
                                static_cast<std::size_t>(get_req(q, "n")));
    }
  } else if (op == "dudley_bound") {
    const auto model = model_of(q.at("model"));
    const auto n = static_cast<std::size_t>(get_req(q, "n"));
    const double alpha = q.contains("alpha") ? get_req(q, "alpha") : dudley_optimal_alpha(model, n);
    out["alpha"] = alpha;
    out["value"] = dudley_bound(model, n, alpha);
  } else if (op == "xi_bound") {
    BoundInputs in;
    in.n = static_cast<std::size_t>(get_req(q, "n"));
    in.epsilon = get_req(q, "epsilon");
    in.delta = q.value("delta", 0.1);
    in.C = q.value("C", 1.0);
    in.r_star = q.value("r_star", 0.0);
    out["value"] = xi_bound(model_of(q.at("model")), in);
  } else {
    throw std::invalid_argument("bounds query: unknown op '" + op + "'");
  }
  return out;
}

int cmd_bounds(const std::string& query) {
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(query);
  } catch (const std::exception& e) {
    std::cerr << "bounds query error: invalid JSON: " << e.what() << "\n";
    return 2;
  }
  try {
    ordered_json results = ordered_json::array();
    if (parsed.is_array()) {
      for (const auto& q : parsed) results.push_back(eval_bounds_query(q));
    } else {
      results.push_back(eval_bounds_query(parsed));
    }
    std::cout << results.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "bounds query error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aggregation-of-leaders regression estimators: experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", query;
  std::vector<std::string> report_dirs;
  unsigned jobs = 1;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  auto* jobs_opt = run->add_option("--jobs", jobs, "worker threads");
  auto* seed_opt = run->add_option("--seed", seed, "override the base seed");
  (void)out_opt;

  auto* report = app.add_subcommand("report", "summarize finished runs");
  report->add_option("--in", report_dirs, "run output directory")->required()->expected(-1);

  auto* bounds = app.add_subcommand("bounds", "evaluate theoretical quantities");
  bounds->add_option("--query", query, "JSON query or array of queries")->required();

  auto* selftest = app.add_subcommand("selftest", "structural checks plus a determinism diff");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, jobs, seed, jobs_opt->count() > 0,
                     seed_opt->count() > 0);
    }
    if (report->parsed()) return cmd_report(report_dirs);
    if (bounds->parsed()) return cmd_bounds(query);
    if (selftest->parsed()) return aol::harness::run_selftest(std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
