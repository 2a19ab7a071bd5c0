#pragma once

#include "replisure/study_model.hpp"

namespace replisure {

enum class Method { two_trials, sceptical };
enum class PowerKind { conditional, predictive };

// Smallest replication z that lifts the sceptical z to threshold t for an
// original at z_o.  Requires z_o > t > 0.
double required_z_r(double z_o, double c, double t);

// Probability that the replication will succeed, given the original result.
// Conditional power treats the original point estimate as the truth;
// predictive power integrates over its uncertainty.  Powers are zero when the
// original itself fails the respective success threshold.
double ttr_conditional_power(double z_o, double c, double alpha);
double ttr_predictive_power(double z_o, double c, double alpha);
double sceptical_conditional_power(double z_o, double c, double alpha);
double sceptical_predictive_power(double z_o, double c, double alpha);

// Probability of declaring replication success when the true replication
// effect sits exactly at the margin.
double conditional_type1(double z_o, double c, double alpha, Method method);

// Relative sample size c = se_o^2/se_r^2 needed to reach the target power.
// Throws std::runtime_error when no c in [1e-3, 1e3] can reach it.
double required_relative_sample_size(double z_o, double alpha, double target_power,
                                     Method method, PowerKind kind);

struct PowerResult {
  std::string label;
  double alpha = 0;
  double cp_ttr = 0;
  double cp_sceptical = 0;
  double pp_ttr = 0;
  double pp_sceptical = 0;
};

PowerResult replication_power(const StudyPair& pair, double alpha);

}  // namespace replisure
