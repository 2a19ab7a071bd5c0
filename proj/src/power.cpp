#include "replisure/power.hpp"

#include <cmath>
#include <stdexcept>

#include "replisure/assessment.hpp"
#include "replisure/numerics.hpp"

namespace replisure {

namespace {

void check_power_args(double z_o, double c, double alpha, const char* who) {
  if (!std::isfinite(z_o))
    throw std::domain_error(std::string(who) + ": non-finite z_o");
  if (!(c > 0) || !std::isfinite(c))
    throw std::domain_error(std::string(who) + ": c must be positive and finite");
  if (!(alpha > 0 && alpha < 0.5))
    throw std::domain_error(std::string(who) + ": alpha must lie in (0, 0.5)");
}

}  // namespace

double required_z_r(double z_o, double c, double t) {
  if (!(t > 0) || !std::isfinite(t))
    throw std::domain_error("required_z_r: t must be positive and finite");
  if (!(z_o > t))
    throw std::domain_error("required_z_r: needs z_o above the threshold t");
  if (!(c > 0) || !std::isfinite(c))
    throw std::domain_error("required_z_r: c must be positive and finite");
  return t * std::sqrt(1.0 + c / (z_o * z_o / (t * t) - 1.0));
}

double ttr_conditional_power(double z_o, double c, double alpha) {
  check_power_args(z_o, c, alpha, "ttr_conditional_power");
  const double za = num::norm_quantile(1.0 - alpha);
  if (z_o < za) return 0.0;  // original not significant, the rule cannot succeed
  return num::norm_cdf(std::sqrt(c) * z_o - za);
}

double ttr_predictive_power(double z_o, double c, double alpha) {
  check_power_args(z_o, c, alpha, "ttr_predictive_power");
  const double za = num::norm_quantile(1.0 - alpha);
  if (z_o < za) return 0.0;
  return num::norm_cdf((std::sqrt(c) * z_o - za) / std::sqrt(1.0 + c));
}

double sceptical_conditional_power(double z_o, double c, double alpha) {
  check_power_args(z_o, c, alpha, "sceptical_conditional_power");
  const double t = controlled_threshold(alpha, c);
  if (!(z_o > t)) return 0.0;
  return num::norm_cdf(std::sqrt(c) * z_o - required_z_r(z_o, c, t));
}

double sceptical_predictive_power(double z_o, double c, double alpha) {
  check_power_args(z_o, c, alpha, "sceptical_predictive_power");
  const double t = controlled_threshold(alpha, c);
  if (!(z_o > t)) return 0.0;
  return num::norm_cdf((std::sqrt(c) * z_o - required_z_r(z_o, c, t)) /
                       std::sqrt(1.0 + c));
}

double conditional_type1(double z_o, double c, double alpha, Method method) {
  check_power_args(z_o, c, alpha, "conditional_type1");
  if (method == Method::two_trials) {
    const double za = num::norm_quantile(1.0 - alpha);
    return z_o < za ? 0.0 : alpha;
  }
  const double t = controlled_threshold(alpha, c);
  if (!(z_o > t)) return 0.0;
  return num::norm_sf(required_z_r(z_o, c, t));
}

namespace {

double power_at(double z_o, double c, double alpha, Method method, PowerKind kind) {
  if (method == Method::two_trials)
    return kind == PowerKind::conditional ? ttr_conditional_power(z_o, c, alpha)
                                          : ttr_predictive_power(z_o, c, alpha);
  return kind == PowerKind::conditional
             ? sceptical_conditional_power(z_o, c, alpha)
             : sceptical_predictive_power(z_o, c, alpha);
}

}  // namespace

double required_relative_sample_size(double z_o, double alpha, double target_power,
                                     Method method, PowerKind kind) {
  if (!(alpha > 0 && alpha < 0.5))
    throw std::domain_error("required_relative_sample_size: alpha must lie in (0, 0.5)");
  if (!(target_power > 0 && target_power < 1))
    throw std::domain_error(
        "required_relative_sample_size: target power must lie in (0, 1)");
  if (!std::isfinite(z_o))
    throw std::domain_error("required_relative_sample_size: non-finite z_o");

  if (method == Method::two_trials && kind == PowerKind::conditional) {
    const double za = num::norm_quantile(1.0 - alpha);
    if (z_o < za)
      throw std::runtime_error(
          "required_relative_sample_size: original not significant, no sample size helps");
    const double zt = num::norm_quantile(target_power);
    if (za + zt <= 0.0)
      throw std::runtime_error(
          "required_relative_sample_size: target sits below the power floor");
    const double r = (za + zt) / z_o;
    return r * r;
  }

  constexpr double c_lo = 1e-3, c_hi = 1e3;
  auto gap = [&](double c) { return power_at(z_o, c, alpha, method, kind) - target_power; };
  const double g_lo = gap(c_lo), g_hi = gap(c_hi);
  if (g_lo >= 0.0)
    throw std::runtime_error(
        "required_relative_sample_size: target already met below c = 1e-3");
  if (g_hi < 0.0)
    throw std::runtime_error(
        "required_relative_sample_size: target unreachable even at c = 1e3");
  const double c = num::find_root(gap, {c_lo, c_hi}, 1e-10);
  if (std::fabs(gap(c)) > 1e-6)
    throw std::runtime_error("required_relative_sample_size: root did not meet target");
  return c;
}

PowerResult replication_power(const StudyPair& pair, double alpha) {
  if (!(alpha > 0 && alpha < 0.5))
    throw std::domain_error("replication_power: alpha must lie in (0, 0.5)");
  const NormalizedPair n = normalize_pair(pair);
  PowerResult r;
  r.label = pair.label;
  r.alpha = alpha;
  r.cp_ttr = ttr_conditional_power(n.z_o, n.c, alpha);
  r.cp_sceptical = sceptical_conditional_power(n.z_o, n.c, alpha);
  r.pp_ttr = ttr_predictive_power(n.z_o, n.c, alpha);
  r.pp_sceptical = sceptical_predictive_power(n.z_o, n.c, alpha);
  return r;
}

}  // namespace replisure
