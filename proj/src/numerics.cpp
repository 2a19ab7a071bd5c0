#include "replisure/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace replisure::num {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

}  // namespace

double norm_pdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("norm_pdf: non-finite argument");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
  if (std::isnan(x)) throw std::domain_error("norm_cdf: nan argument");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double norm_sf(double x) {
  if (std::isnan(x)) throw std::domain_error("norm_sf: nan argument");
  return 0.5 * std::erfc(x / kSqrt2);
}

namespace {

// Wichura's PPND16 rational approximation to the normal quantile.
double quantile_seed(double p) {
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.74545014278341407640e-4 * r + 0.0227238449892691845833) * r +
              0.241780725177450611770) * r + 1.27045825245236838258) * r +
            3.64784832476320460504) * r + 5.76949722146069140550) * r +
          4.63033784615654529590) * r + 1.42343711074968357734) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              0.0151986665636164571966) * r + 0.148103976427480074590) * r +
            0.689767334985100004550) * r + 1.67638483018380384940) * r +
          2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              0.00124266094738807843860) * r + 0.0265321895265761230930) * r +
            0.296560571828504891230) * r + 1.78482653991729133580) * r +
          5.46378491116411436990) * r + 6.65790464350110377720) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            0.0148753612908506148525) * r + 0.136929880922735805310) * r +
          0.599832206555887937690) * r + 1.0);
  }
  return q < 0 ? -x : x;
}

}  // namespace

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("norm_quantile: p must lie strictly in (0, 1)");
  double x = quantile_seed(p);
  // One Newton step against the tail that represents p without cancellation.
  const double d = norm_pdf(x);
  if (d > 1e-290) {
    if (p <= 0.5)
      x -= (norm_cdf(x) - p) / d;
    else
      x += (norm_sf(x) - (1.0 - p)) / d;
  }
  return x;
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol) {
  if (!(tol > 0)) throw std::invalid_argument("find_root: tol must be positive");
  double a = bracket.lo, b = bracket.hi;
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw std::invalid_argument("find_root: bracket must be finite with lo < hi");
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::invalid_argument("find_root: no sign change over bracket");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 =
        2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      // Inverse quadratic interpolation, falling back to secant when two of
      // the points coincide.
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double r = fb / fc;
        q = fa / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol1)
      b += d;
    else
      b += xm > 0.0 ? tol1 : -tol1;
    fb = f(b);
    if (fb == 0.0) return b;
  }
  throw std::runtime_error("find_root: no convergence within 200 iterations");
}

namespace {

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double a = 0, b = 0;
  double value = 0;
  double err = 0;
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b,
                 int& evaluations) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    kron += (f1 + f2) * kWgk[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kWg[i / 2];
  }
  evaluations += 15;
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * half;
  p.err = std::fabs((kron - gauss) * half);
  if (!std::isfinite(p.value) || !std::isfinite(p.err))
    throw std::runtime_error("integrate: integrand produced a non-finite value");
  return p;
}

QuadratureResult integrate_finite(const std::function<double(double)>& f,
                                  double lo, double hi, double abs_tol) {
  constexpr int kMaxPanels = 2000;
  int evaluations = 0;
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
  Panel first = eval_panel(f, lo, hi, evaluations);
  double total = first.value;
  double total_err = first.err;
  queue.push(first);
  while (total_err > abs_tol) {
    if (static_cast<int>(queue.size()) >= kMaxPanels)
      throw std::runtime_error("integrate: tolerance not reached within panel budget");
    const Panel worst = queue.top();
    queue.pop();
    total -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw std::runtime_error("integrate: interval too small to subdivide further");
    for (const Panel& child :
         {eval_panel(f, worst.a, mid, evaluations), eval_panel(f, mid, worst.b, evaluations)}) {
      total += child.value;
      total_err += child.err;
      queue.push(child);
    }
  }
  return {total, total_err, evaluations};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, double abs_tol) {
  if (!(abs_tol > 0))
    throw std::invalid_argument("integrate: abs_tol must be positive");
  if (!std::isfinite(lo))
    throw std::invalid_argument("integrate: lower limit must be finite");
  if (std::isnan(hi)) throw std::invalid_argument("integrate: nan upper limit");
  if (std::isinf(hi)) {
    // x = lo + u / (1 - u) maps [0, 1) onto [lo, +inf); Kronrod nodes are
    // interior so u = 1 is never touched.
    auto g = [&f, lo](double u) {
      const double w = 1.0 - u;
      return f(lo + u / w) / (w * w);
    };
    return integrate_finite(g, 0.0, 1.0, abs_tol);
  }
  if (!(lo < hi))
    throw std::invalid_argument("integrate: limits must satisfy lo < hi");
  return integrate_finite(f, lo, hi, abs_tol);
}

}  // namespace replisure::num
