#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "aol/bounds.hpp"
#include "aol/harness.hpp"

namespace aol::harness {

namespace {

// distance straight from the definition, independent of the deviation-merge
// implementation path
double oracle_metric(const Predictor& f, const Predictor& g, const Dataset& s) {
  double total = 0.0;
  for (const LabeledPair& z : s.pairs) {
    const double diff = evaluate(f, z.x) - evaluate(g, z.x);
    total += diff * diff;
  }
  return std::sqrt(total / static_cast<double>(s.size()));
}

Dataset random_dataset(std::size_t n, PointIndex support, Rng& rng) {
  Dataset d;
  d.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1),
                       rng.bernoulli(0.5) ? 1.0 : 0.0});
  }
  return d;
}

std::vector<Predictor> random_members(std::size_t count, PointIndex support, Rng& rng) {
  std::vector<Predictor> members;
  members.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> vals(support);
    for (double& v : vals) v = rng.next_unit();
    members.push_back(Predictor::member(FlatFunction::from_dense(vals)));
  }
  return members;
}

CheckResult check_net_properties(Rng& rng) {
  CheckResult res{"net covering/properness/separation", true, ""};
  for (int trial = 0; trial < 12 && res.passed; ++trial) {
    const PointIndex support = 6 + static_cast<PointIndex>(rng.below(8));
    const auto members = random_members(8 + rng.below(24), support, rng);
    const Dataset s = random_dataset(40, support, rng);
    const auto ctx = EmpiricalMetricContext::from_sample(s, support);
    const double eps = rng.uniform(0.05, 0.6);
    const EpsilonNet net = greedy_cover(members, eps, ctx);

    for (std::size_t i = 0; i < members.size(); ++i) {
      double best = 1e300;
      for (std::uint32_t c : net.center_ids) best = std::min(best, oracle_metric(members[i], members[c], s));
      if (best > eps + 1e-12) {
        res.passed = false;
        res.detail = "member uncovered at distance " + std::to_string(best);
      }
    }
    for (std::size_t a = 0; a < net.center_ids.size() && res.passed; ++a) {
      if (net.center_ids[a] >= members.size()) {
        res.passed = false;
        res.detail = "center id out of range";
        break;
      }
      for (std::size_t b = a + 1; b < net.center_ids.size(); ++b) {
        const double d = oracle_metric(members[net.center_ids[a]], members[net.center_ids[b]], s);
        if (d <= eps) {
          res.passed = false;
          res.detail = "centers not separated";
        }
      }
    }
    // the metric itself against the definition
    for (int k = 0; k < 5 && res.passed; ++k) {
      const auto i = rng.below(members.size());
      const auto j = rng.below(members.size());
      const double got = emp_metric(members[i], members[j], ctx);
      const double want = oracle_metric(members[i], members[j], s);
      if (std::abs(got - want) > 1e-12) {
        res.passed = false;
        res.detail = "emp_metric disagrees with the definition";
      }
    }
  }
  return res;
}

CheckResult check_partition_properties(Rng& rng) {
  CheckResult res{"partition disjoint-exhaustive nearest-center", true, ""};
  for (int trial = 0; trial < 12 && res.passed; ++trial) {
    const PointIndex support = 6 + static_cast<PointIndex>(rng.below(8));
    const auto members = random_members(8 + rng.below(24), support, rng);
    const Dataset s = random_dataset(40, support, rng);
    const auto ctx = EmpiricalMetricContext::from_sample(s, support);
    const double eps = rng.uniform(0.05, 0.6);
    const Partition part = build_partition(members, eps, ctx);

    if (part.assignment.size() != members.size()) {
      res.passed = false;
      res.detail = "assignment not exhaustive";
      break;
    }
    std::vector<std::uint32_t> counts(part.n_cells(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::uint32_t cell = part.assignment[i];
      if (cell >= part.n_cells()) {
        res.passed = false;
        res.detail = "cell index out of range";
        break;
      }
      ++counts[cell];
      // nearest center; exact tie-breaking is pinned by deterministic unit tests
      double best = 1e300;
      for (std::uint32_t c = 0; c < part.n_cells(); ++c) {
        best = std::min(best, oracle_metric(members[i], members[part.net.center_ids[c]], s));
      }
      const double assigned =
          oracle_metric(members[i], members[part.net.center_ids[part.assignment[i]]], s);
      if (assigned > best + 1e-12) {
        res.passed = false;
        res.detail = "assignment not nearest-center";
      }
      if (assigned > eps + 1e-12) {
        res.passed = false;
        res.detail = "member farther than epsilon from its center";
      }
    }
    for (std::uint32_t c = 0; c < part.n_cells() && res.passed; ++c) {
      if (counts[c] == 0) {
        res.passed = false;
        res.detail = "empty cell";
      }
      if (part.assignment[part.net.center_ids[c]] != c) {
        res.passed = false;
        res.detail = "center not in its own cell";
      }
    }
  }
  return res;
}

CheckResult check_star_exactness(Rng& rng) {
  CheckResult res{"star aggregate risk <= min candidate risk", true, ""};
  for (int trial = 0; trial < 30 && res.passed; ++trial) {
    const PointIndex support = 4 + static_cast<PointIndex>(rng.below(6));
    const auto members = random_members(2 + rng.below(12), support, rng);
    const Dataset s = random_dataset(30, support, rng);
    const Predictor star = star_aggregate(members, s);
    double min_risk = 1e300;
    for (const Predictor& g : members) min_risk = std::min(min_risk, emp_risk(g, s));
    if (emp_risk(star, s) > min_risk) {
      res.passed = false;
      res.detail = "star risk above the best candidate";
    }
  }
  return res;
}

CheckResult check_simplex_solver(Rng& rng) {
  CheckResult res{"simplex solver monotone, gap <= 1e-6, matches grid search", true, ""};
  for (int trial = 0; trial < 10 && res.passed; ++trial) {
    const PointIndex support = 6;
    std::vector<FlatFunction> dict;
    for (int j = 0; j < 3; ++j) {
      std::vector<double> vals(support);
      for (double& v : vals) v = rng.next_unit();
      dict.push_back(FlatFunction::from_dense(vals));
    }
    Dataset s = random_dataset(50, support, rng);
    const auto moments = LabelMoments::from_sample(s, support);

    // rebuild the quadratic to trace the objective
    const std::vector<std::uint32_t> all = {0, 1, 2};
    const ErmResult erm = erm_simplex(dict, all, moments, 1e-6, 2000000);
    if (!erm.converged || erm.certificate.value > 1e-6) {
      res.passed = false;
      res.detail = "solver failed to reach the gap tolerance";
      break;
    }

    // brute-force grid over the 2-simplex, step 0.01
    double grid_best = 1e300;
    for (int a = 0; a <= 100; ++a) {
      for (int b = 0; b <= 100 - a; ++b) {
        const double t0 = a / 100.0, t1 = b / 100.0, t2 = 1.0 - t0 - t1;
        double risk = 0.0;
        for (std::size_t slot = 0; slot < moments.atoms.size(); ++slot) {
          const PointIndex atom = moments.atoms[slot];
          const double v = t0 * dict[0].value_at(atom) + t1 * dict[1].value_at(atom) +
                           t2 * dict[2].value_at(atom);
          risk += moments.cnt[slot] * v * v - 2.0 * v * moments.sy[slot];
        }
        risk = (risk + moments.syy_total) / static_cast<double>(moments.n);
        grid_best = std::min(grid_best, risk);
      }
    }
    if (erm.empirical_risk > grid_best + 2e-4) {
      res.passed = false;
      res.detail = "solver risk above the grid optimum";
    }

    // monotone objective trace on a fresh instance of the same quadratic
    std::vector<std::vector<double>> gram(3, std::vector<double>(3, 0.0));
    std::vector<double> cross(3, 0.0);
    const double inv_n = 1.0 / static_cast<double>(moments.n);
    for (std::size_t slot = 0; slot < moments.atoms.size(); ++slot) {
      const PointIndex atom = moments.atoms[slot];
      for (int i = 0; i < 3; ++i) {
        cross[i] += moments.sy[slot] * inv_n * dict[i].value_at(atom);
        for (int j = 0; j < 3; ++j) {
          gram[i][j] += moments.cnt[slot] * inv_n * dict[i].value_at(atom) * dict[j].value_at(atom);
        }
      }
    }
    std::vector<double> trace;
    simplex_least_squares(gram, cross, moments.syy_total * inv_n, 1e-6, 2000000, &trace);
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (trace[i] > trace[i - 1] + 1e-12) {
        res.passed = false;
        res.detail = "objective increased between iterations";
      }
    }
  }
  return res;
}

CheckResult check_exact_risk_mc(Rng& rng) {
  CheckResult res{"exact risk matches 1e5-sample Monte Carlo", true, ""};
  for (int trial = 0; trial < 3 && res.passed; ++trial) {
    World world = trial == 0 ? make_vc_world(64, 2, rng)
                             : make_hypercube_world(50 + 20 * trial, 2.0,
                                                    HypercubeVariant::Risk, rng);
    std::vector<double> vals(world.support_size);
    for (double& v : vals) v = rng.next_unit();
    const Predictor pred = Predictor::member(FlatFunction::from_dense(vals));

    const double exact = exact_risk(world, pred);
    const std::size_t N = 100000;
    const Dataset mc = sample_world(world, N, rng);
    double sum = 0, sumsq = 0;
    for (const LabeledPair& z : mc.pairs) {
      const double loss = (evaluate(pred, z.x) - z.y) * (evaluate(pred, z.x) - z.y);
      sum += loss;
      sumsq += loss * loss;
    }
    const double mean = sum / N;
    const double sd = std::sqrt(std::max(0.0, sumsq / N - mean * mean) / N);
    if (std::abs(mean - exact) > 4.0 * sd + 1e-12) {
      res.passed = false;
      res.detail = "deviation " + std::to_string(std::abs(mean - exact)) + " vs stderr " +
                   std::to_string(sd);
    }
  }
  return res;
}

}  // namespace

std::vector<CheckResult> structural_checks(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_net_properties(rng));
  out.push_back(check_partition_properties(rng));
  out.push_back(check_star_exactness(rng));
  out.push_back(check_simplex_solver(rng));
  out.push_back(check_exact_risk_mc(rng));
  return out;
}

int run_selftest(std::ostream& out) {
  bool ok = true;
  for (const CheckResult& c : structural_checks(0xae01u)) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.passed) out << " (" << c.detail << ")";
    out << "\n";
    ok = ok && c.passed;
  }

  // miniature rate run, twice; canonical bytes must agree
  ExperimentConfig cfg;
  cfg.world.kind = "finite";
  cfg.estimators.resize(2);
  cfg.estimators[0].name = "aol";
  cfg.estimators[0].epsilon = {EpsilonRule::Kind::Vc, 2.0, 0.1};
  cfg.estimators[1].name = "skeleton";
  cfg.estimators[1].epsilon = {EpsilonRule::Kind::Vc, 2.0, 0.1};
  cfg.n_grid = {256, 512, 1024};
  cfg.replications = 40;
  cfg.base_seed = 777;
  cfg.jobs = 1;

  const std::string first = render_rows_csv(run_experiment(cfg), /*zero_wall=*/true);
  const std::string second = render_rows_csv(run_experiment(cfg), /*zero_wall=*/true);
  const bool identical = first == second;
  out << (identical ? "ok   " : "FAIL ") << "doubled miniature run produces identical csv bytes ("
      << first.size() << " bytes)\n";
  ok = ok && identical;

  out << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace aol::harness
