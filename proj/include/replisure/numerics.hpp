#pragma once

#include <functional>

namespace replisure::num {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Standard normal density, lower tail, upper tail and quantile.  cdf and sf
// are built on erfc so each tail keeps full relative accuracy; the quantile
// pairs a rational approximation with one Newton polish against the
// better-conditioned tail.
double norm_pdf(double x);
double norm_cdf(double x);
double norm_sf(double x);
double norm_quantile(double p);

struct Bracket {
  double lo = 0;
  double hi = 0;
};

// Brent's method on a sign-changing bracket.  Throws std::invalid_argument if
// the bracket is bad and std::runtime_error if the iteration stalls.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol = 1e-10);

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  int evaluations = 0;
};

// Adaptive 15-point Kronrod / 7-point Gauss integration, subdividing the
// worst interval first.  hi may be +infinity, handled by a rational change of
// variable.  Throws std::runtime_error when the subdivision budget runs out
// or the integrand produces a non-finite value.
QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, double abs_tol = 1e-10);

}  // namespace replisure::num
