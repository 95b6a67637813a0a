#include "aol/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aol::bounds {

namespace {

constexpr double kPi = 3.14159265358979323846;

// int_0^c sqrt(log(1/t)) dt for c in [0,1], via t = exp(-u^2)
double sqrt_log_integral(double c) {
  if (c <= 0) return 0.0;
  if (c >= 1) return std::sqrt(kPi) / 2.0;
  const double u = std::sqrt(std::log(1.0 / c));
  return c * u + std::sqrt(kPi) / 2.0 * std::erfc(u);
}

void check_model(const EntropyModel& m) {
  switch (m.kind) {
    case EntropyModel::Kind::Poly:
      if (m.A <= 0 || m.p <= 0) throw std::invalid_argument("entropy model: A and p must be positive");
      break;
    case EntropyModel::Kind::Vc:
      if (m.A <= 0 || m.v <= 0) throw std::invalid_argument("entropy model: A and v must be positive");
      break;
    case EntropyModel::Kind::Finite:
      if (m.M < 2) throw std::invalid_argument("entropy model: finite class needs M >= 2");
      break;
  }
}

}  // namespace

EntropyModel EntropyModel::poly(double A, double p) {
  EntropyModel m;
  m.kind = Kind::Poly;
  m.A = A;
  m.p = p;
  check_model(m);
  return m;
}

EntropyModel EntropyModel::vc(double A, double v) {
  EntropyModel m;
  m.kind = Kind::Vc;
  m.A = A;
  m.v = v;
  check_model(m);
  return m;
}

EntropyModel EntropyModel::finite(double M) {
  EntropyModel m;
  m.kind = Kind::Finite;
  m.M = M;
  check_model(m);
  return m;
}

double BoundInputs::beta() const {
  if (n < 5) throw std::invalid_argument("bound inputs: n >= 5 required");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("bound inputs: delta in (0,1)");
  return (std::log(1.0 / delta) + std::log(std::log(static_cast<double>(n)))) /
         static_cast<double>(n);
}

double BoundInputs::gamma() const {
  return std::sqrt(epsilon * epsilon + r_star + beta());
}

double loc_radius_from_rad(double rad, std::size_t n) {
  if (n < 2) throw std::invalid_argument("loc_radius: n >= 2 required");
  if (rad < 0) throw std::invalid_argument("loc_radius: negative Rademacher estimate");
  const double l = std::log(64.0 * static_cast<double>(n));
  return 12.0 * 42.0 * 42.0 * l * l * l * rad * rad;
}

double loc_radius(const EntropyModel& model, std::size_t n) {
  check_model(model);
  if (n < 2) throw std::invalid_argument("loc_radius: n >= 2 required");
  const double nd = static_cast<double>(n);
  switch (model.kind) {
    case EntropyModel::Kind::Finite:
      return 144.0 * std::log(model.M) / nd;
    case EntropyModel::Kind::Vc: {
      const double c_a = std::max(2.0, 36.0 / (model.A * model.A));
      if (nd < c_a * model.v) throw std::invalid_argument("loc_radius: n too small for the vc formula");
      const double inner = std::log(std::exp(1.0) * model.A / 6.0 * std::sqrt(nd / model.v));
      return 576.0 * model.v / nd * std::max(1.0, inner);
    }
    case EntropyModel::Kind::Poly: {
      const double rad = dudley_bound(model, n, dudley_optimal_alpha(model, n));
      return loc_radius_from_rad(rad, n);
    }
  }
  throw std::logic_error("loc_radius: unknown model kind");
}

double dudley_bound(const EntropyModel& model, std::size_t n, double alpha) {
  check_model(model);
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("dudley_bound: alpha in [0,1]");
  const double scale = 12.0 / std::sqrt(static_cast<double>(n));
  double integral = 0.0;
  switch (model.kind) {
    case EntropyModel::Kind::Finite:
      integral = (1.0 - alpha) * std::sqrt(std::log(model.M));
      break;
    case EntropyModel::Kind::Poly: {
      const double sa = std::sqrt(model.A);
      if (model.p >= 2 && alpha == 0.0) {
        throw std::domain_error("dudley_bound: integral diverges at 0 for p >= 2");
      }
      if (model.p == 2) {
        integral = sa * std::log(1.0 / alpha);
      } else {
        const double e = 1.0 - model.p / 2.0;
        integral = sa * (1.0 - std::pow(alpha, e)) / e;
      }
      break;
    }
    case EntropyModel::Kind::Vc: {
      const double upper = std::min(1.0, model.A);
      if (alpha < upper) {
        integral = model.A * std::sqrt(model.v) *
                   (sqrt_log_integral(upper / model.A) - sqrt_log_integral(alpha / model.A));
      }
      break;
    }
  }
  return 4.0 * alpha + scale * integral;
}

double dudley_optimal_alpha(const EntropyModel& model, std::size_t n) {
  check_model(model);
  const double nd = static_cast<double>(n);
  switch (model.kind) {
    case EntropyModel::Kind::Finite:
      // linear in alpha; the slope decides which endpoint wins
      return (12.0 / std::sqrt(nd)) * std::sqrt(std::log(model.M)) <= 4.0 ? 0.0 : 1.0;
    case EntropyModel::Kind::Poly:
      if (model.p > 2) return std::pow(nd, -1.0 / model.p);
      if (model.p == 2) return std::min(1.0, 3.0 * std::sqrt(model.A / nd));
      return 0.0;
    case EntropyModel::Kind::Vc:
      return std::clamp(model.A * std::exp(-nd / (9.0 * model.v)), 0.0, std::min(1.0, model.A));
  }
  throw std::logic_error("dudley_optimal_alpha: unknown model kind");
}

double xi_bound(const EntropyModel& model, const BoundInputs& in) {
  check_model(model);
  const double gamma = in.gamma();
  const double upper = in.C * gamma;
  const double nd = static_cast<double>(in.n);
  double integral = 0.0;
  switch (model.kind) {
    case EntropyModel::Kind::Finite:
      integral = upper * std::sqrt(std::log(model.M));
      break;
    case EntropyModel::Kind::Poly: {
      const double sa = std::sqrt(model.A);
      if (model.p < 2) {
        const double e = 1.0 - model.p / 2.0;
        integral = sa * std::pow(upper, e) / e;
      } else {
        // the integral diverges at 0; truncate below at 1/n
        const double lo = 1.0 / nd;
        if (upper > lo) {
          if (model.p == 2) {
            integral = sa * std::log(upper / lo);
          } else {
            const double e = model.p / 2.0 - 1.0;
            integral = sa * (std::pow(lo, -e) - std::pow(upper, -e)) / e;
          }
        }
      }
      break;
    }
    case EntropyModel::Kind::Vc:
      integral = model.A * std::sqrt(model.v) * sqrt_log_integral(std::min(upper / model.A, 1.0));
      break;
  }
  return gamma * std::sqrt(in.r_star) + integral / std::sqrt(nd);
}

double psi_nms(std::size_t n, std::size_t M, std::size_t s) {
  if (n < 1 || s < 1 || s > M) throw std::invalid_argument("psi_nms: need n >= 1 and 1 <= s <= M");
  const double nd = static_cast<double>(n);
  const double Md = static_cast<double>(M);
  const double sd = static_cast<double>(s);
  const double sparse = sd / nd * std::log(std::exp(1.0) * Md / sd);
  const double hull = std::sqrt(std::log(1.0 + Md / std::sqrt(nd)) / nd);
  return std::min({sparse, hull, 1.0});
}

double tilde_psi(std::size_t m, std::size_t n) {
  if (n < 1 || m < 1) throw std::invalid_argument("tilde_psi: m, n >= 1");
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return std::min(md / nd, std::sqrt(std::log(1.0 + md / std::sqrt(nd)) / nd));
}

double barpsi(std::size_t n, double p, double delta_sq) {
  if (p <= 2) throw std::invalid_argument("barpsi: requires p > 2");
  if (delta_sq < 0 || delta_sq > 1) throw std::invalid_argument("barpsi: Delta^2 in [0,1]");
  const double nd = static_cast<double>(n);
  const double lo = std::pow(nd, -2.0 / (2.0 + p));
  const double hi = std::pow(nd, -1.0 / p);
  if (delta_sq <= lo) return lo;
  if (delta_sq >= hi) return hi;
  return delta_sq;
}

double rate_exponent(const std::string& setting, double p) {
  if (setting == "regret-poly") return p <= 2 ? -2.0 / (2.0 + p) : -1.0 / p;
  if (setting == "risk-poly") return -2.0 / (2.0 + p);
  if (setting == "vc") return -1.0;
  if (setting == "finite-aggregate") return -1.0;
  if (setting == "finite-erm") return -0.5;
  if (setting == "skeleton-poly") return -1.0 / (p + 1.0);
  if (setting == "regret-lower") {
    if (p < 2) throw std::invalid_argument("rate_exponent: regret-lower needs p >= 2");
    return -1.0 / (p - 1.0);
  }
  throw std::invalid_argument("rate_exponent: unknown setting '" + setting + "'");
}

}  // namespace aol::bounds
