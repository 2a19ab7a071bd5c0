#pragma once

#include <utility>
#include <vector>

#include "replisure/study_model.hpp"

namespace replisure {

// Fixed-effect inverse-variance pooling of (estimate, se) pairs on the log
// scale.
struct MetaResult {
  double estimate = 0;
  double se = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double level = 0.95;
};

MetaResult fixed_effect_meta(const std::vector<std::pair<double, double>>& estimates,
                             double level = 0.95);

// Cochran's heterogeneity statistic for the same input.
struct CochranQ {
  double q = 0;
  int df = 0;
  double p = 1;
};

CochranQ cochran_q(const std::vector<std::pair<double, double>>& estimates);

// Chi-squared upper tail for the handful of degrees of freedom the
// heterogeneity test needs (1 through 5).
double chisq_survival(double x, int df);

// Upper limit of the one-sided combined interval on the hazard ratio scale:
// the margin at which the controlled sceptical p-value rises to
// sqrt(overall_alpha).  The default 0.025 matches a one-sided 97.5% limit.
double sceptical_ci_upper(const StudyPair& pair, double overall_alpha = 0.025);

struct CombinedCI {
  std::string label;
  double meta_hr = 0;
  double meta_lo = 0;
  double meta_hi = 0;
  double sceptical_upper_hr = 0;
  double overall_alpha = 0.025;
};

CombinedCI combined_ci(const StudyPair& pair, double overall_alpha = 0.025);

}  // namespace replisure
