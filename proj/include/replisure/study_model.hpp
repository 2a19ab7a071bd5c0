#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace replisure {

enum class Design { superiority, non_inferiority };

// One study arm comparison: a hazard ratio with its two-sided confidence
// interval, everything internal done on the log scale.
struct StudyEffect {
  double hr = 1.0;
  double ci_lo = 1.0;
  double ci_hi = 1.0;
  double ci_level = 0.95;

  double log_hr() const;
  double se() const;  // standard error of log(hr) recovered from the interval
};

// A randomized trial paired with its real-world emulation, assessed against a
// common margin.  Superiority pairs carry margin_hr = 1; non-inferiority
// pairs a margin above 1.
struct StudyPair {
  std::string label;
  Design design = Design::superiority;
  double margin_hr = 1.0;
  StudyEffect original;
  StudyEffect replication;
  bool medicare_available = false;
};

// Margin-shifted summaries on the log scale.  Positive z means evidence of
// benefit relative to the margin; c compares the precision of the two
// studies (>1 when the replication is less precise).
struct NormalizedPair {
  double theta_o = 0, se_o = 0, z_o = 0;
  double theta_r = 0, se_r = 0, z_r = 0;
  double c = 0;
  double delta = 0;  // log margin
};

double se_from_ci(double ci_lo, double ci_hi, double ci_level);
double z_to_p(double z);
double p_to_z(double p);

// Validates the pair and throws std::invalid_argument with the offending
// field named when a value is out of range.
void validate_pair(const StudyPair& pair);

NormalizedPair normalize_pair(const StudyPair& pair);

struct Dataset {
  std::vector<StudyPair> pairs;

  const StudyPair* find(const std::string& label) const;
};

// Load failure with the 1-based data row attached (0 for the header or
// file-level problems).
class IngestError : public std::runtime_error {
 public:
  IngestError(int row, const std::string& message);
  int row() const { return row_; }

 private:
  int row_;
};

// CSV columns: label,design,margin_hr,rct_hr,rct_lo,rct_hi,rwe_hr,rwe_lo,
// rwe_hi,medicare_available.  Lines starting with '#' are comments.
Dataset load_dataset(std::istream& in, const std::string& source_name);
Dataset load_dataset_file(const std::string& path);

// The reference set of trial / emulation pairs compiled into the library.
const char* bundled_dataset_csv();
Dataset load_bundled_dataset();

}  // namespace replisure
