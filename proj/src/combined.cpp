#include "replisure/combined.hpp"

#include <cmath>
#include <stdexcept>

#include "replisure/assessment.hpp"
#include "replisure/numerics.hpp"

namespace replisure {

namespace {

void check_estimates(const std::vector<std::pair<double, double>>& estimates,
                     const char* who) {
  if (estimates.size() < 2)
    throw std::invalid_argument(std::string(who) + ": needs at least two estimates");
  for (const auto& [theta, se] : estimates) {
    if (!std::isfinite(theta))
      throw std::invalid_argument(std::string(who) + ": non-finite estimate");
    if (!(se > 0) || !std::isfinite(se))
      throw std::invalid_argument(std::string(who) +
                                  ": standard errors must be positive and finite");
  }
}

}  // namespace

MetaResult fixed_effect_meta(const std::vector<std::pair<double, double>>& estimates,
                             double level) {
  check_estimates(estimates, "fixed_effect_meta");
  if (!(level > 0 && level < 1))
    throw std::invalid_argument("fixed_effect_meta: level must lie in (0, 1)");
  double wsum = 0, wtheta = 0;
  for (const auto& [theta, se] : estimates) {
    const double w = 1.0 / (se * se);
    wsum += w;
    wtheta += w * theta;
  }
  MetaResult r;
  r.estimate = wtheta / wsum;
  r.se = std::sqrt(1.0 / wsum);
  r.level = level;
  const double z = num::norm_quantile(0.5 * (1.0 + level));
  r.ci_lo = r.estimate - z * r.se;
  r.ci_hi = r.estimate + z * r.se;
  return r;
}

double chisq_survival(double x, int df) {
  if (!(x >= 0) || !std::isfinite(x))
    throw std::domain_error("chisq_survival: x must be non-negative and finite");
  if (df < 1 || df > 5)
    throw std::domain_error("chisq_survival: df must lie between 1 and 5");
  // Closed forms for df 1 and 2, then the two-step recurrence
  // S_{k+2}(x) = S_k(x) + (x/2)^{k/2} e^{-x/2} / Gamma(k/2 + 1).
  double s;
  int k;
  if (df % 2 == 1) {
    s = std::erfc(std::sqrt(0.5 * x));
    k = 1;
  } else {
    s = std::exp(-0.5 * x);
    k = 2;
  }
  while (k + 2 <= df) {
    s += std::pow(0.5 * x, 0.5 * k) * std::exp(-0.5 * x) / std::tgamma(0.5 * k + 1.0);
    k += 2;
  }
  return s;
}

CochranQ cochran_q(const std::vector<std::pair<double, double>>& estimates) {
  check_estimates(estimates, "cochran_q");
  const MetaResult pooled = fixed_effect_meta(estimates);
  CochranQ r;
  for (const auto& [theta, se] : estimates) {
    const double d = theta - pooled.estimate;
    r.q += d * d / (se * se);
  }
  r.df = static_cast<int>(estimates.size()) - 1;
  r.p = chisq_survival(r.q, r.df);
  return r;
}

double sceptical_ci_upper(const StudyPair& pair, double overall_alpha) {
  if (!(overall_alpha > 0 && overall_alpha < 0.25))
    throw std::domain_error("sceptical_ci_upper: overall_alpha must lie in (0, 0.25)");
  const NormalizedPair n = normalize_pair(pair);
  const double target = std::sqrt(overall_alpha);
  // As the hypothetical margin grows both z values grow, the sceptical z
  // grows, and its controlled p-value falls; just above theta_o it starts
  // near 1/2, so a single crossing with the target exists whenever the pair
  // is convincing enough at large margins.
  auto p_at = [&n](double delta) {
    const double zo = (delta - n.theta_o) / n.se_o;
    const double zr = (delta - n.theta_r) / n.se_r;
    return *sceptical_p_controlled(zo, zr, n.c);
  };
  const double step = std::max(n.se_o, n.se_r);
  const double lo = n.theta_o + 1e-9 * step;
  const double base = std::max(n.theta_o, n.theta_r);
  double offset = step;
  while (p_at(base + offset) > target) {
    offset *= 2.0;
    if (offset > 20.0 * step)
      throw std::runtime_error(
          "sceptical_ci_upper: no crossing within 20 standard errors of the estimates");
  }
  const double dstar = num::find_root(
      [&](double d) { return p_at(d) - target; }, {lo, base + offset}, 1e-11);
  return std::exp(dstar);
}

CombinedCI combined_ci(const StudyPair& pair, double overall_alpha) {
  const NormalizedPair n = normalize_pair(pair);
  const MetaResult meta =
      fixed_effect_meta({{n.theta_o, n.se_o}, {n.theta_r, n.se_r}});
  CombinedCI r;
  r.label = pair.label;
  r.meta_hr = std::exp(meta.estimate);
  r.meta_lo = std::exp(meta.ci_lo);
  r.meta_hi = std::exp(meta.ci_hi);
  r.sceptical_upper_hr = sceptical_ci_upper(pair, overall_alpha);
  r.overall_alpha = overall_alpha;
  return r;
}

}  // namespace replisure
