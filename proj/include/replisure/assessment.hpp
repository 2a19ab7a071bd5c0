#pragma once

#include <optional>

#include "replisure/study_model.hpp"

namespace replisure {

// The sceptical z solves (z_o^2/z^2 - 1)(z_r^2/z^2 - 1) = c and carries the
// sign of z_r.  It is undefined when the original shows no benefit (z_o <= 0)
// and zero when the replication sits exactly at the margin.
struct ScepticalZ {
  double zeta = 0;
  bool defined = false;
};

ScepticalZ sceptical_z(double z_o, double z_r, double c);

// Variance of the sceptical prior that just renders the original
// non-significant at level alpha.  Requires the original to be significant.
double sceptical_prior_variance(double se_o, double z_o, double alpha);

// Tail probability of the margin under the normal posterior obtained from the
// sceptical prior: Phi((theta_r - delta) / sqrt(tau2 + se_r^2)).
double box_tail_probability(double theta_r, double se_r, double tau2, double delta);

// Probability, under a null original and null replication, that the sceptical
// z reaches nominal threshold t.  Strictly decreasing in t with limit 1/4 at
// t -> 0.
double t1e_sceptical(double t, double c);

// Threshold on the sceptical z such that the probability above equals
// alpha^2, matching the two-trials rule's overall type I error.
double controlled_threshold(double alpha, double c);

// One-sided replication p-values from the sceptical z: the nominal tail
// 1 - Phi(zeta), and the recalibrated version whose alpha-level test has
// overall type I error alpha^2.  Empty when the sceptical z is undefined.
std::optional<double> sceptical_p_nominal(double z_o, double z_r, double c);
std::optional<double> sceptical_p_controlled(double z_o, double z_r, double c);

// The two-trials rule's p-value: both studies must clear alpha on their own,
// so the larger one-sided p decides.
double two_trials_p(double p_o, double p_r);

struct AssessmentResult {
  std::string label;
  double alpha = 0;
  double p_o = 0;
  double p_r = 0;
  double c = 0;
  double p_ttr = 1;
  std::optional<double> p_s_nominal;
  std::optional<double> p_s_controlled;
  bool success_ttr = false;
  bool success_sceptical = false;
};

AssessmentResult assess_pair(const StudyPair& pair, double alpha);

}  // namespace replisure
