#include "aol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "aol/bounds.hpp"

namespace aol::harness {

namespace {

using nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& label, std::size_t n,
                          std::uint32_t rep) {
  return Rng::mix(base_seed, fnv1a(label), static_cast<std::uint64_t>(n), rep);
}

// ---------------------------------------------------------------------------
// World and candidate factories
// ---------------------------------------------------------------------------

World build_world(const WorldConfig& wc, std::size_t n, Rng& rng) {
  if (wc.kind == "finite") {
    return make_finite_constants_world(wc.num_constants, wc.support_size, wc.eta_lo, wc.eta_hi,
                                       wc.pin_best_constant, rng);
  }
  if (wc.kind == "finite-gap") return make_finite_gap_world(n);
  if (wc.kind == "vc") return make_vc_world(n, wc.vc_dim, rng);
  if (wc.kind == "hypercube-risk") {
    return make_hypercube_world(n, wc.p, HypercubeVariant::Risk, rng);
  }
  if (wc.kind == "hypercube-regret") {
    return make_hypercube_world(n, wc.p, HypercubeVariant::Regret, rng);
  }
  if (wc.kind == "delta") {
    World base = make_hypercube_world(n, wc.p, HypercubeVariant::Risk, rng);
    return make_delta_world(wc.p, wc.delta, base);
  }
  if (wc.kind == "dictionary") {
    return make_dictionary_world(wc.dict_size, wc.sparsity, wc.support_size ? wc.support_size : 40,
                                 rng);
  }
  if (wc.kind == "box-sequence") {
    World w;
    w.support_size = wc.truncation;
    w.mu.assign(wc.truncation, 1.0 / static_cast<double>(wc.truncation));
    w.eta.resize(wc.truncation);
    for (PointIndex j = 1; j <= wc.truncation; ++j) {
      const double half = std::pow(static_cast<double>(j), -1.0 / wc.p) / 2.0;
      w.eta[j - 1] = 0.5 + rng.uniform(-half, half);
    }
    BoxSequence cls{wc.p, wc.truncation, wc.grid_step, wc.truncation};
    w.ref_class = cls;
    w.id = "box-sequence(p=" + fmt(wc.p) + ";J=" + std::to_string(wc.truncation) + ")";
    w.spec_json = "{\"kind\":\"box-sequence\",\"p\":" + fmt(wc.p) + "}";
    return finalize_world(std::move(w));
  }
  throw std::invalid_argument("unknown world kind '" + wc.kind + "'");
}

namespace {

std::vector<Predictor> indicator_candidates(const World& world, const VcIndicator& vc,
                                            const EstimatorConfig& ec, const Dataset& data) {
  // frequency-ranked sample atoms; supports over unseen atoms are
  // indistinguishable under the empirical metric anyway
  std::vector<std::uint32_t> freq(world.support_size + 1, 0);
  for (const LabeledPair& z : data.pairs) ++freq[z.x];
  std::vector<PointIndex> sampled;
  for (PointIndex a = 1; a <= world.support_size; ++a) {
    if (freq[a] > 0) sampled.push_back(a);
  }
  std::sort(sampled.begin(), sampled.end(), [&](PointIndex a, PointIndex b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return a < b;
  });

  auto patterns_for = [&](std::size_t m) -> std::uint64_t {
    const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    for (std::uint32_t j = 0; j <= vc.d && j <= m; ++j) {
      std::uint64_t binom = 1;
      for (std::uint32_t i = 1; i <= j; ++i) {
        if (binom > cap / (m - j + i)) return cap;
        binom = binom * (m - j + i) / i;
      }
      if (total > cap - binom) return cap;
      total += binom;
    }
    return total;
  };
  std::size_t m_atoms = 0;
  while (m_atoms < sampled.size() && patterns_for(m_atoms + 1) <= ec.proxy_cap) ++m_atoms;
  std::vector<PointIndex> atoms(sampled.begin(), sampled.begin() + m_atoms);
  std::sort(atoms.begin(), atoms.end());
  return enumerate_indicator_supports(world.support_size, vc.amplitude, vc.d, atoms,
                                      ec.proxy_cap);
}

std::vector<Predictor> box_candidates(const World& world, const BoxSequence& box,
                                      const EstimatorConfig& ec, const Dataset& data,
                                      Rng& rng) {
  const PointIndex d = box.truncation;
  const double amp = 0.25 * std::pow(static_cast<double>(d), -1.0 / box.p);

  std::vector<PointIndex> actives;
  if (d <= 4096) {
    actives.resize(d);
    for (PointIndex j = 0; j < d; ++j) actives[j] = j + 1;
  } else {
    std::vector<std::uint8_t> seen(world.support_size + 1, 0);
    for (const LabeledPair& z : data.pairs) seen[z.x] = 1;
    for (PointIndex a = 1; a <= world.support_size; ++a) {
      if (seen[a] && a <= d) actives.push_back(a);
    }
  }

  std::vector<Predictor> out;
  out.reserve(1 + ec.proxy_members + ec.proxy_box_members);
  out.push_back(Predictor::member(FlatFunction::constant(world.support_size, 0.5)));

  // amplitude-scale members: f_j in {1/2, 1/2 + amp} on a bounded share of
  // the active atoms
  const auto ones = std::max<std::size_t>(
      1, static_cast<std::size_t>(ec.proxy_ones_frac * static_cast<double>(actives.size())));
  std::vector<PointIndex> pool = actives;
  for (std::uint32_t i = 0; i < ec.proxy_members; ++i) {
    for (std::size_t j = 0; j < ones && j < pool.size(); ++j) {  // partial Fisher-Yates
      const std::size_t pick = j + rng.below(pool.size() - j);
      std::swap(pool[j], pool[pick]);
    }
    FlatFunction f;
    f.support_size = world.support_size;
    f.baseline = 0.5;
    std::vector<PointIndex> chosen(pool.begin(), pool.begin() + std::min(ones, pool.size()));
    std::sort(chosen.begin(), chosen.end());
    for (PointIndex a : chosen) f.devs.emplace_back(a, 0.5 + amp);
    out.push_back(Predictor::member(std::move(f)));
  }

  // grid-spread members: f_j uniform over the coordinate grid
  for (std::uint32_t i = 0; i < ec.proxy_box_members; ++i) {
    FlatFunction f;
    f.support_size = world.support_size;
    f.baseline = 0.5;
    for (PointIndex a : actives) {
      const double half = std::pow(static_cast<double>(a), -1.0 / box.p);
      const auto steps = static_cast<long>(std::floor(half / box.grid_step + 1e-12));
      const long pick = static_cast<long>(rng.below(2 * steps + 1)) - steps;
      const double g = static_cast<double>(pick) * box.grid_step;
      if (g != 0.0) f.devs.emplace_back(a, (1.0 + g) / 2.0);
    }
    out.push_back(Predictor::member(std::move(f)));
  }
  return out;
}

}  // namespace

std::vector<Predictor> build_candidates(const World& world, const EstimatorConfig& ec,
                                        const Dataset& data, Rng& rng) {
  const FunctionSpec& spec = world.ref_class;
  if (std::holds_alternative<FiniteList>(spec)) {
    return enumerate_members(spec, ec.member_budget);
  }
  if (const auto* vc = std::get_if<VcIndicator>(&spec)) {
    const auto count = count_members(spec);
    if (count && *count <= std::min<std::uint64_t>(ec.member_budget, ec.proxy_cap)) {
      return enumerate_members(spec, ec.member_budget);
    }
    return indicator_candidates(world, *vc, ec, data);
  }
  if (const auto* box = std::get_if<BoxSequence>(&spec)) {
    const auto count = count_members(spec);
    if (count && *count <= ec.member_budget) {
      return enumerate_members(spec, ec.member_budget);
    }
    return box_candidates(world, *box, ec, data, rng);
  }
  throw std::invalid_argument(
      "candidate list: dictionary hulls are handled by the sparse convex estimator");
}

// ---------------------------------------------------------------------------
// Single replication
// ---------------------------------------------------------------------------

RiskRow run_single(const WorldConfig& wc, const EstimatorConfig& ec, std::size_t n,
                   std::uint32_t rep, std::uint64_t base_seed) {
  RiskRow row;
  row.estimator = ec.label.empty() ? ec.name : ec.label;
  row.n = n;
  row.rep = rep;
  row.seed = derive_seed(base_seed, row.estimator, n, rep);
  try {
    Rng rng(row.seed);
    World world = build_world(wc, n, rng);
    row.world_id = world.id;
    const bool three_stage = ec.name != "erm";
    const Dataset data = sample_world(world, three_stage ? 3 * n : n, rng);

    FitRecord fit;
    if (ec.name == "sparse-convex") {
      DictionaryHull hull;
      if (const auto* h = std::get_if<DictionaryHull>(&world.ref_class)) {
        hull = *h;
      } else {
        // dictionary drawn from the same class stand-in the other methods use
        const std::vector<Predictor> cands = build_candidates(world, ec, data, rng);
        const std::size_t m = std::min<std::size_t>(ec.dict_size, cands.size());
        hull.dictionary.reserve(m);
        for (std::size_t i = 0; i < m; ++i) hull.dictionary.push_back(cands[i].flat());
        hull.sparsity = std::min<std::uint32_t>(ec.sparsity, static_cast<std::uint32_t>(m));
      }
      fit = sparse_convex_fit(hull, data, ec.aggregator, ec.tol);
    } else if (ec.name == "aol") {
      const std::vector<Predictor> cands = build_candidates(world, ec, data, rng);
      AolConfig cfg;
      cfg.epsilon = ec.epsilon;
      cfg.aggregator = ec.aggregator;
      cfg.member_budget = ec.member_budget;
      fit = aol_fit(cands, data, cfg);
    } else if (ec.name == "skeleton") {
      const std::vector<Predictor> cands = build_candidates(world, ec, data, rng);
      fit = skeleton_fit(cands, data, epsilon_rule(ec.epsilon, n), ec.aggregator);
    } else if (ec.name == "erm") {
      const std::vector<Predictor> cands = build_candidates(world, ec, data, rng);
      fit = global_erm_fit(cands, data);
    } else {
      throw std::invalid_argument("unknown estimator '" + ec.name + "'");
    }

    row.epsilon = fit.epsilon_used;
    row.n_cells = fit.n_cells;
    row.excess_risk = excess_risk(world, fit.predictor);
    row.fit_wall_ms = fit.wall_ms;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
    row.excess_risk = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace

RiskReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_grid.empty() || cfg.replications < 1 || cfg.estimators.empty()) {
    throw std::invalid_argument("experiment config: estimators, n_grid and replications required");
  }
  if (!std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end())) {
    throw std::invalid_argument("experiment config: n_grid must be ascending");
  }

  ExperimentConfig normalized = cfg;
  for (std::size_t i = 0; i < normalized.estimators.size(); ++i) {
    auto& ec = normalized.estimators[i];
    if (ec.label.empty()) ec.label = ec.name;
    for (std::size_t j = 0; j < i; ++j) {
      if (normalized.estimators[j].label == ec.label) {
        ec.label += "#" + std::to_string(i + 1);
        break;
      }
    }
  }

  struct Task {
    std::size_t est;
    std::size_t n_idx;
    std::uint32_t rep;
  };
  std::vector<Task> tasks;
  tasks.reserve(normalized.estimators.size() * normalized.n_grid.size() * normalized.replications);
  for (std::size_t e = 0; e < normalized.estimators.size(); ++e) {
    for (std::size_t ni = 0; ni < normalized.n_grid.size(); ++ni) {
      for (std::uint32_t r = 0; r < normalized.replications; ++r) tasks.push_back({e, ni, r});
    }
  }

  RiskReport report;
  report.config = normalized;
  report.rows.resize(tasks.size());

  const std::uint32_t jobs = std::max<std::uint32_t>(1, normalized.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& t = tasks[i];
      report.rows[i] = run_single(normalized.world, normalized.estimators[t.est],
                                  normalized.n_grid[t.n_idx], t.rep, normalized.base_seed);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::uint32_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (const RiskRow& row : report.rows) {
    if (row.failed) ++report.failures;
  }

  try {
    Rng rng(derive_seed(normalized.base_seed, normalized.estimators[0].label,
                        normalized.n_grid[0], 0));
    report.world_spec_example = build_world(normalized.world, normalized.n_grid[0], rng).spec_json;
  } catch (const std::exception&) {
    // replay record is best-effort; row errors already carry the details
  }

  // per-estimator summaries
  for (std::size_t e = 0; e < normalized.estimators.size(); ++e) {
    SlopeSummary sum;
    sum.estimator = normalized.estimators[e].label;
    sum.target = normalized.estimators[e].target_exponent;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t ni = 0; ni < normalized.n_grid.size(); ++ni) {
      std::vector<double> vals;
      vals.reserve(normalized.replications);
      const std::size_t base = (e * normalized.n_grid.size() + ni) * normalized.replications;
      for (std::uint32_t r = 0; r < normalized.replications; ++r) {
        const RiskRow& row = report.rows[base + r];
        if (!row.failed) vals.push_back(row.excess_risk);
      }
      if (vals.empty()) continue;
      const double mean = mean_of(vals);
      sum.means.emplace_back(normalized.n_grid[ni], mean);
      sum.medians.emplace_back(normalized.n_grid[ni], median_of(vals));
      pts.emplace_back(static_cast<double>(normalized.n_grid[ni]), mean);
    }
    try {
      const SlopeFit sf = fit_slope(pts);
      sum.slope = sf.slope;
      sum.slope_stderr = sf.stderr_;
      sum.slope_valid = true;
    } catch (const std::exception&) {
      sum.slope_valid = false;
    }
    report.summaries.push_back(std::move(sum));
  }
  return report;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [n, mean] : points) {
    if (mean > 0 && n > 0) logs.emplace_back(std::log(n), std::log(mean));
  }
  if (logs.size() < 3) {
    throw std::invalid_argument("fit_slope: need at least 3 points with positive means");
  }
  const double k = static_cast<double>(logs.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.points_used = logs.size();
  double ssr = 0;
  for (const auto& [x, y] : logs) {
    const double r = y - my - fit.slope * (x - mx);
    ssr += r * r;
  }
  fit.stderr_ = std::sqrt(ssr / (k - 2.0) / sxx);
  return fit;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string render_rows_csv(const RiskReport& report, bool zero_wall) {
  std::string out = "world_id,estimator,n,rep,seed,epsilon,n_cells,excess_risk,fit_wall_ms\n";
  char line[512];
  for (const RiskRow& r : report.rows) {
    std::snprintf(line, sizeof(line), "%s,%s,%zu,%u,%llu,%s,%u,%s,%s\n", r.world_id.c_str(),
                  r.estimator.c_str(), r.n, r.rep, static_cast<unsigned long long>(r.seed),
                  fmt(r.epsilon).c_str(), r.n_cells, fmt(r.excess_risk).c_str(),
                  fmt(zero_wall ? 0.0 : r.fit_wall_ms).c_str());
    out += line;
  }
  return out;
}

std::vector<RiskRow> parse_rows_csv(const std::string& text) {
  std::vector<RiskRow> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cells.size() != 9) throw std::runtime_error("rows.csv: malformed line: " + line);
    RiskRow r;
    r.world_id = cells[0];
    r.estimator = cells[1];
    r.n = std::stoull(cells[2]);
    r.rep = static_cast<std::uint32_t>(std::stoul(cells[3]));
    r.seed = std::stoull(cells[4]);
    r.epsilon = std::stod(cells[5]);
    r.n_cells = static_cast<std::uint32_t>(std::stoul(cells[6]));
    r.excess_risk = std::stod(cells[7]);
    r.fit_wall_ms = std::stod(cells[8]);
    r.failed = std::isnan(r.excess_risk);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_summary_json(const RiskReport& report) {
  ordered_json j;
  j["world_kind"] = report.config.world.kind;
  j["n_grid"] = report.config.n_grid;
  j["replications"] = report.config.replications;
  j["base_seed"] = report.config.base_seed;
  j["failures"] = report.failures;
  if (!report.world_spec_example.empty()) {
    j["world_spec_example"] = ordered_json::parse(report.world_spec_example);
  }
  j["estimators"] = ordered_json::array();
  for (const SlopeSummary& s : report.summaries) {
    ordered_json e;
    e["name"] = s.estimator;
    if (s.slope_valid) {
      e["slope"] = s.slope;
      e["slope_stderr"] = s.slope_stderr;
    } else {
      e["slope"] = nullptr;
    }
    if (s.target) e["target_exponent"] = *s.target;
    ordered_json means = ordered_json::array();
    for (const auto& [n, m] : s.means) means.push_back({{"n", n}, {"mean_excess", m}});
    e["means"] = means;
    ordered_json medians = ordered_json::array();
    for (const auto& [n, m] : s.medians) medians.push_back({{"n", n}, {"median_excess", m}});
    e["medians"] = medians;
    j["estimators"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string render_rates_svg(const RiskReport& report) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const double W = 640, H = 480, L = 70, B = 60, T = 20, R = 20;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const SlopeSummary& s : report.summaries) {
    for (const auto& [n, m] : s.means) {
      if (m <= 0) continue;
      xmin = std::min(xmin, std::log10(static_cast<double>(n)));
      xmax = std::max(xmax, std::log10(static_cast<double>(n)));
      ymin = std::min(ymin, std::log10(m));
      ymax = std::max(ymax, std::log10(m));
    }
  }
  if (xmax <= xmin || ymax <= ymin) {
    return "<svg xmlns='http://www.w3.org/2000/svg' width='640' height='480'>"
           "<text x='20' y='40'>no positive means to plot</text></svg>\n";
  }
  const double padx = 0.05 * (xmax - xmin), pady = 0.08 * (ymax - ymin);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
      << "' stroke='black'/>\n";
  svg << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
      << "' stroke='black'/>\n";
  svg << "<text x='" << (W / 2) << "' y='" << (H - 15)
      << "' text-anchor='middle' font-size='13'>log10 n</text>\n";
  svg << "<text x='18' y='" << (H / 2)
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 " << (H / 2)
      << ")'>log10 mean excess risk</text>\n";

  int ci = 0;
  double legend_y = T + 14;
  for (const SlopeSummary& s : report.summaries) {
    const char* color = colors[ci++ % 5];
    std::ostringstream poly;
    for (const auto& [n, m] : s.means) {
      if (m <= 0) continue;
      const double x = px(std::log10(static_cast<double>(n)));
      const double y = py(std::log10(m));
      svg << "<circle cx='" << x << "' cy='" << y << "' r='3.5' fill='" << color << "'/>\n";
      poly << x << "," << y << " ";
    }
    svg << "<polyline points='" << poly.str() << "' fill='none' stroke='" << color
        << "' stroke-width='1.2' stroke-dasharray='4 3'/>\n";
    svg << "<text x='" << W - R - 8 << "' y='" << legend_y
        << "' text-anchor='end' font-size='12' fill='" << color << "'>" << s.estimator;
    if (s.slope_valid) {
      char b[64];
      std::snprintf(b, sizeof(b), " (slope %.3f)", s.slope);
      svg << b;
    }
    svg << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string table1_report(const std::vector<RiskReport>& reports) {
  struct Cell {
    bool present = false;
    double slope = 0;
  };
  struct Row {
    std::string regime;
    double target_aol, target_skeleton, target_erm;
    Cell aol, skeleton, erm;
  };
  std::vector<Row> rows;
  auto row_for = [&](const std::string& regime, double ta, double ts, double te) -> Row& {
    for (Row& r : rows) {
      if (r.regime == regime) return r;
    }
    rows.push_back({regime, ta, ts, te, {}, {}, {}});
    return rows.back();
  };

  for (const RiskReport& rep : reports) {
    const std::string& kind = rep.config.world.kind;
    const double p = rep.config.world.p;
    std::string regime;
    double ta, ts, te;
    if (kind == "finite" || kind == "finite-gap") {
      regime = "finite";
      ta = bounds::rate_exponent("finite-aggregate");
      ts = bounds::rate_exponent("finite-aggregate");
      te = bounds::rate_exponent("finite-erm");
    } else if (kind == "vc") {
      regime = "parametric (vc)";
      ta = bounds::rate_exponent("vc");
      ts = -0.5;
      te = -0.5;
    } else if (kind == "hypercube-regret") {
      regime = "regret lower bound p=" + fmt(p);
      ta = ts = te = bounds::rate_exponent("regret-lower", p);
    } else {
      regime = "nonparametric p=" + fmt(p);
      ta = bounds::rate_exponent("regret-poly", p);
      ts = std::max(bounds::rate_exponent("skeleton-poly", p), -0.5);
      te = p < 2 ? -0.5 : -1.0 / p;
    }
    Row& row = row_for(regime, ta, ts, te);
    for (const SlopeSummary& s : rep.summaries) {
      if (!s.slope_valid) continue;
      Cell* cell = nullptr;
      if (s.estimator.rfind("aol", 0) == 0) cell = &row.aol;
      if (s.estimator.rfind("skeleton", 0) == 0) cell = &row.skeleton;
      if (s.estimator.rfind("erm", 0) == 0) cell = &row.erm;
      if (cell) {
        cell->present = true;
        cell->slope = s.slope;
      }
    }
  }

  std::ostringstream out;
  out << "rate comparison (fitted slope | target exponent)\n";
  out << "----------------------------------------------------------------------------\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-15s %-15s %-15s\n", "regime", "aol", "skeleton",
                "erm");
  out << line;
  auto cell_text = [](const Cell& c, double target) {
    char b[64];
    if (c.present) {
      std::snprintf(b, sizeof(b), "%+.2f | %+.2f", c.slope, target);
    } else {
      std::snprintf(b, sizeof(b), "  -  | %+.2f", target);
    }
    return std::string(b);
  };
  for (const Row& r : rows) {
    std::snprintf(line, sizeof(line), "%-28s %-15s %-15s %-15s\n", r.regime.c_str(),
                  cell_text(r.aol, r.target_aol).c_str(),
                  cell_text(r.skeleton, r.target_skeleton).c_str(),
                  cell_text(r.erm, r.target_erm).c_str());
    out << line;
  }
  if (rows.empty()) out << "(no reports)\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

EpsilonRule parse_epsilon(const ordered_json& j) {
  EpsilonRule rule;
  if (!j.is_object()) throw std::invalid_argument("config: epsilon must be an object");
  const std::string kind = j.value("rule", "poly");
  if (kind == "poly") {
    rule.kind = EpsilonRule::Kind::Poly;
    rule.p = j.value("p", 2.0);
  } else if (kind == "vc") {
    rule.kind = EpsilonRule::Kind::Vc;
  } else if (kind == "explicit") {
    rule.kind = EpsilonRule::Kind::Explicit;
    rule.value = j.at("value").get<double>();
  } else {
    throw std::invalid_argument("config: unknown epsilon rule '" + kind + "'");
  }
  return rule;
}

AggregatorSpec parse_aggregator(const ordered_json& j) {
  AggregatorSpec agg;
  if (!j.is_object()) throw std::invalid_argument("config: aggregator must be an object");
  const std::string kind = j.value("kind", "star");
  if (kind == "star") {
    agg.kind = AggregatorSpec::Kind::Star;
  } else if (kind == "exp-weights") {
    agg.kind = AggregatorSpec::Kind::ExpWeights;
    agg.beta = j.value("beta", 4.0);
    if (agg.beta <= 0) throw std::invalid_argument("config: beta must be positive");
  } else {
    throw std::invalid_argument("config: unknown aggregator kind '" + kind + "'");
  }
  return agg;
}

ExperimentConfig config_from_parsed(const ordered_json& j) {
  ExperimentConfig cfg;
  const auto& jw = j.at("world");
  cfg.world.kind = jw.at("kind").get<std::string>();
  cfg.world.p = jw.value("p", 2.0);
  cfg.world.vc_dim = jw.value("d", 3u);
  cfg.world.delta = jw.value("delta", 0.1);
  cfg.world.num_constants = jw.value("num_constants", 16u);
  cfg.world.support_size = jw.value("support_size", cfg.world.kind == "dictionary" ? 40u : 8u);
  cfg.world.eta_lo = jw.value("eta_low", 0.3);
  cfg.world.eta_hi = jw.value("eta_high", 0.7);
  cfg.world.pin_best_constant = jw.value("pin_best_constant", true);
  cfg.world.dict_size = jw.value("dict_size", 20u);
  cfg.world.sparsity = jw.value("sparsity", 2u);
  cfg.world.truncation = jw.value("truncation", 4u);
  cfg.world.grid_step = jw.value("grid_step", 0.25);

  for (const auto& je : j.at("estimators")) {
    EstimatorConfig ec;
    ec.name = je.at("name").get<std::string>();
    ec.label = je.value("label", ec.name);
    if (je.contains("epsilon")) ec.epsilon = parse_epsilon(je.at("epsilon"));
    if (je.contains("aggregator")) ec.aggregator = parse_aggregator(je.at("aggregator"));
    ec.member_budget = je.value("member_budget", std::uint64_t{65536});
    ec.proxy_cap = je.value("proxy_cap", 2048u);
    ec.proxy_members = je.value("proxy_members", 32u);
    ec.proxy_box_members = je.value("proxy_box_members", 0u);
    ec.proxy_ones_frac = je.value("proxy_ones_frac", 0.02);
    ec.dict_size = je.value("dict_size", 20u);
    ec.sparsity = je.value("sparsity", 2u);
    ec.tol = je.value("tol", 1e-6);
    if (je.contains("target_exponent")) ec.target_exponent = je.at("target_exponent").get<double>();
    cfg.estimators.push_back(std::move(ec));
  }

  cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  cfg.replications = j.at("replications").get<std::uint32_t>();
  cfg.base_seed = j.value("base_seed", std::uint64_t{20260808});
  cfg.jobs = j.value("jobs", 1u);
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return config_from_parsed(j);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

int write_outputs(const RiskReport& report, const std::string& out_dir, bool zero_wall) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "rows.csv", std::ios::binary);
    f << render_rows_csv(report, zero_wall);
  }
  {
    std::ofstream f(fs::path(out_dir) / "summary.json", std::ios::binary);
    f << render_summary_json(report);
  }
  {
    std::ofstream f(fs::path(out_dir) / "rates.svg", std::ios::binary);
    f << render_rates_svg(report);
  }
  return report.failures > 0 ? 3 : 0;
}

}  // namespace aol::harness
