#include "replisure/assessment.hpp"

#include <cmath>
#include <stdexcept>

#include "replisure/numerics.hpp"

namespace replisure {

namespace {

void check_c(double c, const char* who) {
  if (!(c > 0) || !std::isfinite(c))
    throw std::domain_error(std::string(who) + ": c must be positive and finite");
}

}  // namespace

ScepticalZ sceptical_z(double z_o, double z_r, double c) {
  check_c(c, "sceptical_z");
  if (!std::isfinite(z_o) || !std::isfinite(z_r))
    throw std::domain_error("sceptical_z: non-finite z");
  if (z_o <= 0.0) return {0.0, false};
  if (z_r == 0.0) return {0.0, true};
  const double zo2 = z_o * z_o;
  const double zr2 = z_r * z_r;
  const double disc = std::sqrt((zo2 - zr2) * (zo2 - zr2) + 4.0 * c * zo2 * zr2);
  // Larger root of the quadratic in 1/z^2; the smaller root would put z^2
  // between zo^2 and zr^2 where the defining product is negative.
  const double inv_z2 = (zo2 + zr2 + disc) / (2.0 * zo2 * zr2);
  return {std::copysign(std::sqrt(1.0 / inv_z2), z_r), true};
}

double sceptical_prior_variance(double se_o, double z_o, double alpha) {
  if (!(se_o > 0) || !std::isfinite(se_o))
    throw std::domain_error("sceptical_prior_variance: se_o must be positive and finite");
  if (!(alpha > 0 && alpha < 0.5))
    throw std::domain_error("sceptical_prior_variance: alpha must lie in (0, 0.5)");
  const double za = num::norm_quantile(1.0 - alpha);
  const double ratio = (z_o * z_o) / (za * za);
  if (!(z_o > 0) || ratio <= 1.0)
    throw std::domain_error(
        "sceptical_prior_variance: original must be significant at alpha");
  return se_o * se_o / (ratio - 1.0);
}

double box_tail_probability(double theta_r, double se_r, double tau2, double delta) {
  if (!(se_r > 0) || !std::isfinite(se_r))
    throw std::domain_error("box_tail_probability: se_r must be positive and finite");
  if (!(tau2 >= 0) || !std::isfinite(tau2))
    throw std::domain_error("box_tail_probability: tau2 must be non-negative and finite");
  if (!std::isfinite(theta_r) || !std::isfinite(delta))
    throw std::domain_error("box_tail_probability: non-finite argument");
  return num::norm_cdf((theta_r - delta) / std::sqrt(tau2 + se_r * se_r));
}

double t1e_sceptical(double t, double c) {
  check_c(c, "t1e_sceptical");
  if (!(t > 0) || !std::isfinite(t))
    throw std::domain_error("t1e_sceptical: t must be positive and finite");
  // P(zeta >= t) for independent null z_o, z_r, integrating over z_o = x > t
  // the replication tail needed to push the sceptical z past t.
  auto integrand = [t, c](double x) {
    const double r = x * x / (t * t) - 1.0;
    if (r <= 0.0) return 0.0;
    return num::norm_sf(t * std::sqrt(1.0 + c / r)) * num::norm_pdf(x);
  };
  const auto body = num::integrate(integrand, t + 1e-6, t + 40.0, 1e-11);
  // Beyond x = t + 40 the replication hurdle is essentially t itself.
  const double far_tail = num::norm_sf(t) * num::norm_sf(t + 40.0);
  return body.value + far_tail;
}

double controlled_threshold(double alpha, double c) {
  check_c(c, "controlled_threshold");
  if (!(alpha > 0 && alpha <= 0.5))
    throw std::domain_error("controlled_threshold: alpha must lie in (0, 0.5]");
  const double target = alpha * alpha;
  if (target >= 0.25) return 0.0;  // t -> 0 limit of the error rate
  return num::find_root(
      [c, target](double t) { return t1e_sceptical(t, c) - target; },
      {1e-8, 10.0}, 1e-10);
}

std::optional<double> sceptical_p_nominal(double z_o, double z_r, double c) {
  const ScepticalZ z = sceptical_z(z_o, z_r, c);
  if (!z.defined) return std::nullopt;
  return num::norm_sf(z.zeta);
}

std::optional<double> sceptical_p_controlled(double z_o, double z_r, double c) {
  const ScepticalZ z = sceptical_z(z_o, z_r, c);
  if (!z.defined) return std::nullopt;
  if (z.zeta == 0.0) return 0.5;
  if (z.zeta > 0.0) return std::sqrt(t1e_sceptical(z.zeta, c));
  return 1.0 - std::sqrt(t1e_sceptical(-z.zeta, c));
}

double two_trials_p(double p_o, double p_r) {
  if (!(p_o >= 0 && p_o <= 1) || !(p_r >= 0 && p_r <= 1))
    throw std::domain_error("two_trials_p: p-values must lie in [0, 1]");
  return std::max(p_o, p_r);
}

AssessmentResult assess_pair(const StudyPair& pair, double alpha) {
  if (!(alpha > 0 && alpha < 0.5))
    throw std::domain_error("assess_pair: alpha must lie in (0, 0.5)");
  const NormalizedPair n = normalize_pair(pair);
  AssessmentResult r;
  r.label = pair.label;
  r.alpha = alpha;
  r.p_o = z_to_p(n.z_o);
  r.p_r = z_to_p(n.z_r);
  r.c = n.c;
  r.p_ttr = two_trials_p(r.p_o, r.p_r);
  r.p_s_nominal = sceptical_p_nominal(n.z_o, n.z_r, n.c);
  r.p_s_controlled = sceptical_p_controlled(n.z_o, n.z_r, n.c);
  r.success_ttr = r.p_ttr <= alpha;
  r.success_sceptical = r.p_s_controlled.has_value() && *r.p_s_controlled <= alpha;
  return r;
}

}  // namespace replisure
