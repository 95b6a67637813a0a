#pragma once

#include <cstdint>
#include <string>

namespace aol::bounds {

// Empirical entropy growth model: poly means H2(F, rho) <= A rho^{-p},
// vc means N2(F, rho, S) <= (A / rho)^v, finite means |F| = M.
struct EntropyModel {
  enum class Kind { Poly, Vc, Finite };
  Kind kind = Kind::Finite;
  double A = 1.0;
  double p = 1.0;   // poly exponent
  double v = 1.0;   // vc dimension
  double M = 2.0;   // class cardinality (finite)

  static EntropyModel poly(double A, double p);
  static EntropyModel vc(double A, double v);
  static EntropyModel finite(double M);
};

struct BoundInputs {
  std::size_t n = 5;     // sample size, >= 5
  double epsilon = 0.0;  // net radius
  double delta = 0.1;    // confidence level, in (0,1)
  double C = 1.0;        // upper-limit multiplier of the entropy integral
  double r_star = 0.0;   // localization radius

  double beta() const;   // (log(1/delta) + log log n) / n
  double gamma() const;  // sqrt(epsilon^2 + r_star + beta)
};

// Localization radius r* of {(f-g)^2 : f,g in F}:
//   poly/raw Rademacher estimate: 12 * 42^2 * log^3(64 n) * rad^2
//   vc: 576 (v/n) (log((eA/6) sqrt(n/v)) v 1), valid for n >= C_A v
//   finite: 144 log(M) / n
double loc_radius_from_rad(double rad, std::size_t n);
double loc_radius(const EntropyModel& model, std::size_t n);

// inf over alpha of 4 alpha + (12/sqrt(n)) int_alpha^1 sqrt(H2(rho)) d rho,
// evaluated at the given alpha. Throws when the integral diverges (poly
// p >= 2 with alpha = 0).
double dudley_bound(const EntropyModel& model, std::size_t n, double alpha);
// Closed-form minimizing alpha of the bracketed expression.
double dudley_optimal_alpha(const EntropyModel& model, std::size_t n);

// gamma sqrt(r*) + (1/sqrt(n)) int_0^{C gamma} sqrt(H2(rho)) d rho. For poly
// entropy with p >= 2 the integral is truncated below at 1/n.
double xi_bound(const EntropyModel& model, const BoundInputs& in);

// (s/n) log(eM/s)  ^  sqrt((1/n) log(1 + M/sqrt(n)))  ^  1
double psi_nms(std::size_t n, std::size_t M, std::size_t s);

// m/n ^ sqrt((1/n) log(1 + m/sqrt(n)))
double tilde_psi(std::size_t m, std::size_t n);

// Piecewise regret rate under approximation error Delta^2; requires p > 2.
//   n^{-2/(2+p)} / Delta^2 / n^{-1/p} over the three regimes.
double barpsi(std::size_t n, double p, double delta_sq);

// Log-log rate exponents of the excess risk by setting, e.g.
// "regret-poly" (uses p), "risk-poly", "vc", "finite-aggregate",
// "finite-erm", "skeleton-poly", "regret-lower".
double rate_exponent(const std::string& setting, double p = 2.0);

}  // namespace aol::bounds
