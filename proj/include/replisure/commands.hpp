#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "replisure/report.hpp"
#include "replisure/study_model.hpp"

namespace replisure::cli {

enum class OutputFormat { csv, json };
enum class MethodChoice { controlled, nominal, both };

struct RunConfig {
  std::string input = "bundled";
  double alpha = 0.025;
  MethodChoice method = MethodChoice::controlled;
  OutputFormat format = OutputFormat::csv;
  std::string out;  // empty writes to stdout
  bool svg = false;
  std::uint64_t seed = 42;
  std::optional<double> c;  // power-profile precision ratio override
  double rel_effect = 1.0;
  double p_original = 0.025;
  std::string study;
  std::vector<std::string> exclude;
};

// Resolves "bundled" (or the REPLISURE_DATA override) or a file path.
Dataset resolve_dataset(const std::string& input);

// Each command builds the full Report; rendering and file handling live in
// run().  They throw on dataset or numeric failures.
Report cmd_assess(const RunConfig& config);
Report cmd_power(const RunConfig& config);
Report cmd_ci(const RunConfig& config);
Report cmd_curves(const RunConfig& config);
Report cmd_power_profile(const RunConfig& config);
Report cmd_success_curve(const RunConfig& config);
Report cmd_shrinkage(const RunConfig& config);

// One Monte Carlo verification line: either the calibration of the controlled
// threshold (param = alpha, expected = alpha^2) or the analytic null
// exceedance rate at a fixed threshold (param = t).
struct T1eCheck {
  bool calibration = false;
  double c = 0;
  double param = 0;
  double mc = 0;
  double expected = 0;
  double three_se = 0;
  bool pass = false;
};

std::vector<T1eCheck> run_t1e_checks(std::uint64_t seed, double alpha, int draws);

Report cmd_verify_t1e(const RunConfig& config);

// Optional chart for the commands that have a natural one; empty string when
// the command has none.
std::string render_report_svg(const std::string& command, const RunConfig& config,
                              const Report& report);

// Full argv interface; returns the process exit code (0 ok, 2 usage or input
// error, 3 numerical failure).
int run(int argc, const char* const* argv);

}  // namespace replisure::cli
