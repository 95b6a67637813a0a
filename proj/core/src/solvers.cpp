#include "aol/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aol {

ErmResult erm_enumerate(std::span<const Predictor> candidates, const LabelMoments& m) {
  if (candidates.empty()) throw std::invalid_argument("erm_enumerate: no candidates");
  std::uint32_t best = 0;
  double best_risk = emp_risk(candidates[0], m);
  for (std::uint32_t i = 1; i < candidates.size(); ++i) {
    const double r = emp_risk(candidates[i], m);
    if (r < best_risk) {  // strict: ties keep the lowest index
      best_risk = r;
      best = i;
    }
  }
  ErmResult res;
  res.predictor = candidates[best];
  res.chosen_index = best;
  res.empirical_risk = best_risk;
  res.certificate = {Certificate::Kind::ExactEnumeration, 0.0};
  return res;
}

ErmResult erm_enumerate(std::span<const Predictor> candidates, const Dataset& d) {
  if (candidates.empty()) throw std::invalid_argument("erm_enumerate: no candidates");
  const PointIndex support = candidates.front().support_size();
  return erm_enumerate(candidates, LabelMoments::from_sample(d, support));
}

ErmResult erm_cell(std::span<const std::uint32_t> cell, std::span<const Predictor> members,
                   const LabelMoments& m, double refinement_delta) {
  if (cell.empty()) throw std::invalid_argument("erm_cell: empty cell");
  std::uint32_t best = cell[0];
  double best_risk = emp_risk(members[best], m);
  for (std::size_t i = 1; i < cell.size(); ++i) {
    const double r = emp_risk(members[cell[i]], m);
    if (r < best_risk) {
      best_risk = r;
      best = cell[i];
    }
  }
  ErmResult res;
  res.predictor = members[best];
  res.chosen_index = best;
  res.empirical_risk = best_risk;
  res.certificate = {Certificate::Kind::RefinementNet, refinement_delta};
  return res;
}

namespace {

SimplexLsResult single_vertex_result(double objective) {
  SimplexLsResult r;
  r.theta = {1.0};
  r.objective = objective;
  r.gap = 0.0;
  r.converged = true;
  return r;
}

}  // namespace

SimplexLsResult simplex_least_squares(const std::vector<std::vector<double>>& gram,
                                      const std::vector<double>& cross, double r0, double tol,
                                      std::size_t max_iter,
                                      std::vector<double>* objective_trace) {
  const std::size_t k = cross.size();
  if (k == 0) throw std::invalid_argument("simplex_least_squares: empty support");
  if (tol <= 0) throw std::invalid_argument("simplex_least_squares: tol must be positive");

  auto objective_of_vertex = [&](std::size_t j) { return gram[j][j] - 2.0 * cross[j] + r0; };
  if (k == 1) return single_vertex_result(objective_of_vertex(0));

  // start at the best single vertex
  std::size_t v0 = 0;
  double best = objective_of_vertex(0);
  for (std::size_t j = 1; j < k; ++j) {
    const double o = objective_of_vertex(j);
    if (o < best) {
      best = o;
      v0 = j;
    }
  }

  std::vector<double> theta(k, 0.0);
  theta[v0] = 1.0;
  std::vector<double> gtheta = gram[v0];  // G theta

  auto objective = [&]() {
    double quad = 0.0, lin = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      quad += theta[j] * gtheta[j];
      lin += cross[j] * theta[j];
    }
    return quad - 2.0 * lin + r0;
  };

  SimplexLsResult res;
  res.gap = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (objective_trace) objective_trace->push_back(objective());
    // gradient/2 = G theta - c; pick the vertex minimizing the linearization
    std::size_t v = 0;
    double gmin = gtheta[0] - cross[0];
    double gdot = 0.0;  // <grad/2, theta>
    for (std::size_t j = 0; j < k; ++j) {
      const double gj = gtheta[j] - cross[j];
      gdot += gj * theta[j];
      if (gj < gmin) {
        gmin = gj;
        v = j;
      }
    }
    res.gap = 2.0 * (gdot - gmin);  // duality gap; >= suboptimality
    res.iterations = it;
    if (res.gap <= tol) {
      res.converged = true;
      res.theta = theta;
      res.objective = objective();
      return res;
    }
    // exact line search toward vertex v: direction d = e_v - theta
    // t* = (c'd - theta'Gd) / (d'Gd)
    double dGd = 0.0, cd = 0.0, tGd = 0.0;
    // Gd = G e_v - G theta
    for (std::size_t j = 0; j < k; ++j) {
      const double dj = (j == v ? 1.0 : 0.0) - theta[j];
      const double gdj = gram[v][j] - gtheta[j];  // (Gd)_j uses symmetry of G
      dGd += dj * gdj;
      cd += cross[j] * dj;
      tGd += theta[j] * gdj;
    }
    double t = 1.0;
    if (dGd > 0) t = std::clamp((cd - tGd) / dGd, 0.0, 1.0);
    if (t <= 0) {  // stalled: numerically no progress along the steepest vertex
      res.converged = res.gap <= tol;
      res.theta = theta;
      res.objective = objective();
      return res;
    }
    for (std::size_t j = 0; j < k; ++j) {
      theta[j] *= (1.0 - t);
      gtheta[j] += t * (gram[v][j] - gtheta[j]);  // G theta after the convex step
    }
    theta[v] += t;
    // recompute G theta from scratch periodically to control drift
    if ((res.iterations & 63u) == 63u) {
      for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < k; ++l) s += gram[j][l] * theta[l];
        gtheta[j] = s;
      }
    }
  }
  res.converged = false;
  res.theta = theta;
  res.objective = objective();
  res.iterations = max_iter;
  return res;
}

std::size_t default_fw_max_iter(std::size_t support_size, std::size_t n) {
  const double l = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::size_t>(10.0 * static_cast<double>(support_size) * l) + 100;
}

ErmResult erm_simplex(std::span<const FlatFunction> dictionary,
                      std::span<const std::uint32_t> support, const LabelMoments& m,
                      double tol, std::size_t max_iter) {
  if (support.empty()) throw std::invalid_argument("erm_simplex: empty support");
  const std::size_t k = support.size();

  // dictionary values at the sample atoms
  std::vector<std::vector<double>> vals(k, std::vector<double>(m.atoms.size()));
  for (std::size_t j = 0; j < k; ++j) {
    const FlatFunction& f = dictionary[support[j]];
    for (std::size_t s = 0; s < m.atoms.size(); ++s) vals[j][s] = f.value_at(m.atoms[s]);
  }
  const double inv_n = 1.0 / static_cast<double>(m.n);
  std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
  std::vector<double> cross(k, 0.0);
  for (std::size_t s = 0; s < m.atoms.size(); ++s) {
    const double cnt = m.cnt[s] * inv_n;
    const double sy = m.sy[s] * inv_n;
    for (std::size_t j = 0; j < k; ++j) {
      cross[j] += sy * vals[j][s];
      for (std::size_t l = j; l < k; ++l) gram[j][l] += cnt * vals[j][s] * vals[l][s];
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t l = 0; l < j; ++l) gram[j][l] = gram[l][j];
  }
  const double r0 = m.syy_total * inv_n;

  const SimplexLsResult sol = simplex_least_squares(gram, cross, r0, tol, max_iter);

  std::vector<Predictor> comps;
  std::vector<double> weights;
  comps.reserve(k);
  weights.reserve(k);
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (sol.theta[j] > 0.0) {
      comps.push_back(Predictor::member(dictionary[support[j]]));
      weights.push_back(sol.theta[j]);
      total += sol.theta[j];
    }
  }
  for (double& w : weights) w /= total;  // renormalize away line-search round-off

  ErmResult res;
  res.predictor = comps.size() == 1 ? comps.front() : Predictor::mixture(std::move(comps), std::move(weights));
  res.empirical_risk = emp_risk(res.predictor, m);
  res.certificate = {Certificate::Kind::FwGap, sol.gap};
  res.converged = sol.converged;
  return res;
}

}  // namespace aol
