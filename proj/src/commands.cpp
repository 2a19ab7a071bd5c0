#include "replisure/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "replisure/assessment.hpp"
#include "replisure/combined.hpp"
#include "replisure/numerics.hpp"
#include "replisure/power.hpp"

namespace replisure::cli {

Dataset resolve_dataset(const std::string& input) {
  if (input == "bundled") {
    if (const char* env = std::getenv("REPLISURE_DATA"); env && *env)
      return load_dataset_file(env);
    return load_bundled_dataset();
  }
  return load_dataset_file(input);
}

namespace {

const char* method_name(MethodChoice m) {
  switch (m) {
    case MethodChoice::controlled: return "controlled";
    case MethodChoice::nominal: return "nominal";
    case MethodChoice::both: return "both";
  }
  return "controlled";
}

Cell opt_p(const std::optional<double>& p) {
  return p ? Cell::p_value(*p) : Cell::na();
}

}  // namespace

Report cmd_assess(const RunConfig& config) {
  const Dataset ds = resolve_dataset(config.input);
  const bool controlled = config.method != MethodChoice::nominal;
  const bool nominal = config.method != MethodChoice::controlled;

  Report rep;
  rep.command = "assess";
  rep.add_config("input", Cell::str(config.input));
  rep.add_config("alpha", Cell::number(config.alpha));
  rep.add_config("method", Cell::str(method_name(config.method)));

  rep.table.columns = {"label", "p_o", "p_r", "c", "p_ttr"};
  if (controlled) rep.table.columns.push_back("p_s");
  if (nominal) rep.table.columns.push_back("p_s_nominal");
  rep.table.columns.push_back("success_ttr");
  if (controlled) rep.table.columns.push_back("success_sceptical");
  if (nominal) rep.table.columns.push_back("success_nominal");

  int n_ttr = 0, n_scept = 0, n_nom = 0;
  int n_medicare = 0, n_med_ttr = 0, n_med_scept = 0, n_med_nom = 0;
  int n_other = 0, n_oth_ttr = 0, n_oth_scept = 0, n_oth_nom = 0;
  for (const StudyPair& pair : ds.pairs) {
    const AssessmentResult a = assess_pair(pair, config.alpha);
    const bool success_nominal =
        a.p_s_nominal.has_value() && *a.p_s_nominal <= config.alpha;
    std::vector<Cell> row = {Cell::str(a.label), Cell::p_value(a.p_o),
                             Cell::p_value(a.p_r), Cell::number(a.c),
                             Cell::p_value(a.p_ttr)};
    if (controlled) row.push_back(opt_p(a.p_s_controlled));
    if (nominal) row.push_back(opt_p(a.p_s_nominal));
    row.push_back(Cell::boolean(a.success_ttr));
    if (controlled) row.push_back(Cell::boolean(a.success_sceptical));
    if (nominal) row.push_back(Cell::boolean(success_nominal));
    rep.table.add_row(std::move(row));

    n_ttr += a.success_ttr;
    n_scept += a.success_sceptical;
    n_nom += success_nominal;
    if (pair.medicare_available) {
      ++n_medicare;
      n_med_ttr += a.success_ttr;
      n_med_scept += a.success_sceptical;
      n_med_nom += success_nominal;
    } else {
      ++n_other;
      n_oth_ttr += a.success_ttr;
      n_oth_scept += a.success_sceptical;
      n_oth_nom += success_nominal;
    }
  }

  const int n = static_cast<int>(ds.pairs.size());
  rep.add_summary("n", Cell::number(n));
  rep.add_summary("n_success_ttr", Cell::number(n_ttr));
  if (controlled) rep.add_summary("n_success_sceptical", Cell::number(n_scept));
  if (nominal) rep.add_summary("n_success_nominal", Cell::number(n_nom));
  rep.add_summary("n_medicare", Cell::number(n_medicare));
  rep.add_summary("n_medicare_success_ttr", Cell::number(n_med_ttr));
  if (controlled)
    rep.add_summary("n_medicare_success_sceptical", Cell::number(n_med_scept));
  if (nominal) rep.add_summary("n_medicare_success_nominal", Cell::number(n_med_nom));
  rep.add_summary("n_other", Cell::number(n_other));
  rep.add_summary("n_other_success_ttr", Cell::number(n_oth_ttr));
  if (controlled)
    rep.add_summary("n_other_success_sceptical", Cell::number(n_oth_scept));
  if (nominal) rep.add_summary("n_other_success_nominal", Cell::number(n_oth_nom));
  return rep;
}

Report cmd_power(const RunConfig& config) {
  const Dataset ds = resolve_dataset(config.input);
  Report rep;
  rep.command = "power";
  rep.add_config("input", Cell::str(config.input));
  rep.add_config("alpha", Cell::number(config.alpha));
  rep.table.columns = {"label", "cp_ttr_pct", "cp_sceptical_pct", "pp_ttr_pct",
                       "pp_sceptical_pct"};
  double sum_cp_t = 0, sum_cp_s = 0, sum_pp_t = 0, sum_pp_s = 0;
  for (const StudyPair& pair : ds.pairs) {
    const PowerResult p = replication_power(pair, config.alpha);
    rep.table.add_row({Cell::str(p.label), Cell::number(100.0 * p.cp_ttr),
                       Cell::number(100.0 * p.cp_sceptical),
                       Cell::number(100.0 * p.pp_ttr),
                       Cell::number(100.0 * p.pp_sceptical)});
    sum_cp_t += p.cp_ttr;
    sum_cp_s += p.cp_sceptical;
    sum_pp_t += p.pp_ttr;
    sum_pp_s += p.pp_sceptical;
  }
  const double n = static_cast<double>(ds.pairs.size());
  rep.table.add_row({Cell::str("AVERAGE"), Cell::number(100.0 * sum_cp_t / n),
                     Cell::number(100.0 * sum_cp_s / n),
                     Cell::number(100.0 * sum_pp_t / n),
                     Cell::number(100.0 * sum_pp_s / n)});
  rep.add_summary("n", Cell::number(n));
  return rep;
}

Report cmd_ci(const RunConfig& config) {
  const Dataset ds = resolve_dataset(config.input);
  Report rep;
  rep.command = "ci";
  rep.add_config("input", Cell::str(config.input));
  rep.add_config("alpha", Cell::number(config.alpha));
  rep.table.columns = {"label",   "margin_hr", "meta_hr",
                       "meta_lo", "meta_hi",   "sceptical_upper_hr"};
  int errors = 0;
  for (const StudyPair& pair : ds.pairs) {
    const NormalizedPair n = normalize_pair(pair);
    const MetaResult meta =
        fixed_effect_meta({{n.theta_o, n.se_o}, {n.theta_r, n.se_r}});
    Cell upper = Cell::na();
    try {
      upper = Cell::number(sceptical_ci_upper(pair, config.alpha));
    } catch (const std::runtime_error&) {
      ++errors;
    }
    rep.table.add_row({Cell::str(pair.label), Cell::number(pair.margin_hr),
                       Cell::number(std::exp(meta.estimate)),
                       Cell::number(std::exp(meta.ci_lo)),
                       Cell::number(std::exp(meta.ci_hi)), upper});
  }
  rep.add_summary("n", Cell::number(ds.pairs.size()));
  rep.add_summary("n_inversion_errors", Cell::number(errors));
  return rep;
}

Report cmd_curves(const RunConfig& config) {
  if (!(config.p_original > 0 && config.p_original < 0.5))
    throw std::invalid_argument("curves: p-original must lie in (0, 0.5)");
  if (!(config.rel_effect > 0))
    throw std::invalid_argument("curves: rel-effect must be positive");
  Report rep;
  rep.command = "curves";
  rep.add_config("p_original", Cell::number(config.p_original));
  rep.add_config("rel_effect", Cell::number(config.rel_effect));
  rep.table.columns = {"c", "p_sceptical", "p_ttr"};
  const double z_o = p_to_z(config.p_original);
  constexpr int kPoints = 121;
  constexpr double c_lo = 0.05, c_hi = 20.0;
  for (int i = 0; i < kPoints; ++i) {
    const double c = c_lo * std::pow(c_hi / c_lo, i / double(kPoints - 1));
    const double z_r = config.rel_effect * std::sqrt(c) * z_o;
    const double p_s = *sceptical_p_controlled(z_o, z_r, c);
    const double p_ttr = std::max(config.p_original, z_to_p(z_r));
    rep.table.add_row({Cell::number(c), Cell::p_value(p_s), Cell::p_value(p_ttr)});
  }
  rep.add_summary("points", Cell::number(kPoints));
  return rep;
}

Report cmd_power_profile(const RunConfig& config) {
  const Dataset ds = resolve_dataset(config.input);
  const StudyPair* pair = ds.find(config.study);
  if (!pair)
    throw std::invalid_argument("power-profile: no study labelled '" + config.study +
                                "' in the dataset");
  const NormalizedPair n = normalize_pair(*pair);
  const double c = config.c.value_or(n.c);
  if (!(c > 0) || !std::isfinite(c))
    throw std::invalid_argument("power-profile: c must be positive");
  const double alpha = config.alpha;
  const double za = num::norm_quantile(1.0 - alpha);
  const double t = controlled_threshold(alpha, c);

  // Success probabilities if the original estimate (taken as the truth) had
  // been theta; both gates move with theta.
  auto cp_ttr_at = [&](double theta) {
    const double z = (n.delta - theta) / n.se_o;
    if (z < za) return 0.0;
    return num::norm_cdf(std::sqrt(c) * z - za);
  };
  auto cp_sceptical_at = [&](double theta) {
    const double z = (n.delta - theta) / n.se_o;
    if (!(z > t)) return 0.0;
    return num::norm_cdf(std::sqrt(c) * z - required_z_r(z, c, t));
  };

  Report rep;
  rep.command = "power-profile";
  rep.add_config("input", Cell::str(config.input));
  rep.add_config("study", Cell::str(pair->label));
  rep.add_config("alpha", Cell::number(alpha));
  rep.add_config("c", Cell::number(c));
  rep.table.columns = {"theta", "hr", "cp_ttr_pct", "cp_sceptical_pct"};
  constexpr int kPoints = 161;
  for (int i = 0; i < kPoints; ++i) {
    const double theta = n.theta_o + n.se_o * (-4.0 + 8.0 * i / double(kPoints - 1));
    rep.table.add_row({Cell::number(theta), Cell::number(std::exp(theta)),
                       Cell::number(100.0 * cp_ttr_at(theta)),
                       Cell::number(100.0 * cp_sceptical_at(theta))});
  }

  const double z_o = n.z_o;
  rep.add_summary("theta_obs", Cell::number(n.theta_o));
  rep.add_summary("hr_obs", Cell::number(pair->original.hr));
  rep.add_summary("cp_ttr_pct", Cell::number(100.0 * ttr_conditional_power(z_o, c, alpha)));
  rep.add_summary("pp_ttr_pct", Cell::number(100.0 * ttr_predictive_power(z_o, c, alpha)));
  rep.add_summary("cp_sceptical_pct",
                  Cell::number(100.0 * sceptical_conditional_power(z_o, c, alpha)));
  rep.add_summary("pp_sceptical_pct",
                  Cell::number(100.0 * sceptical_predictive_power(z_o, c, alpha)));
  const double zq = num::norm_quantile(0.5 * (1.0 + pair->original.ci_level));
  rep.add_summary("cp_ttr_ci_lo_pct",
                  Cell::number(100.0 * cp_ttr_at(n.theta_o + zq * n.se_o)));
  rep.add_summary("cp_ttr_ci_hi_pct",
                  Cell::number(100.0 * cp_ttr_at(n.theta_o - zq * n.se_o)));
  return rep;
}

Report cmd_success_curve(const RunConfig& config) {
  const Dataset ds = resolve_dataset(config.input);
  Report rep;
  rep.command = "success-curve";
  rep.add_config("input", Cell::str(config.input));
  rep.table.columns = {"alpha", "prop_success_ttr", "prop_success_sceptical",
                       "avg_pp_ttr", "avg_pp_sceptical"};
  struct Entry {
    double z_o = 0, c = 0, p_ttr = 1;
    std::optional<double> p_s;
  };
  std::vector<Entry> entries;
  for (const StudyPair& pair : ds.pairs) {
    const NormalizedPair n = normalize_pair(pair);
    Entry e;
    e.z_o = n.z_o;
    e.c = n.c;
    e.p_ttr = two_trials_p(z_to_p(n.z_o), z_to_p(n.z_r));
    e.p_s = sceptical_p_controlled(n.z_o, n.z_r, n.c);
    entries.push_back(e);
  }
  const double n = static_cast<double>(entries.size());
  for (int i = 1; i <= 100; ++i) {
    const double alpha = i / 1000.0;
    int ttr = 0, scept = 0;
    double pp_t = 0, pp_s = 0;
    for (const Entry& e : entries) {
      ttr += e.p_ttr <= alpha;
      scept += e.p_s.has_value() && *e.p_s <= alpha;
      pp_t += ttr_predictive_power(e.z_o, e.c, alpha);
      pp_s += sceptical_predictive_power(e.z_o, e.c, alpha);
    }
    rep.table.add_row({Cell::number(alpha), Cell::number(ttr / n),
                       Cell::number(scept / n), Cell::number(pp_t / n),
                       Cell::number(pp_s / n)});
  }
  rep.add_summary("n", Cell::number(n));
  return rep;
}

Report cmd_shrinkage(const RunConfig& config) {
  const Dataset ds = resolve_dataset(config.input);
  for (const std::string& label : config.exclude)
    if (!ds.find(label))
      throw std::invalid_argument("shrinkage: no study labelled '" + label +
                                  "' to exclude");
  Report rep;
  rep.command = "shrinkage";
  rep.add_config("input", Cell::str(config.input));
  for (const std::string& label : config.exclude)
    rep.add_config("exclude", Cell::str(label));
  rep.table.columns = {"label",       "rct_shifted", "rct_lo", "rct_hi",
                       "rwe_shifted", "rwe_lo",      "rwe_hi", "shrunken"};
  int n_kept = 0, n_shrunken = 0;
  for (const StudyPair& pair : ds.pairs) {
    if (std::find(config.exclude.begin(), config.exclude.end(), pair.label) !=
        config.exclude.end())
      continue;
    const NormalizedPair n = normalize_pair(pair);
    const double zq = num::norm_quantile(0.5 * (1.0 + pair.original.ci_level));
    const double rct = n.theta_o - n.delta;
    const double rwe = n.theta_r - n.delta;
    const bool shrunken = rct < rwe;  // the emulation sits closer to the margin
    rep.table.add_row({Cell::str(pair.label), Cell::number(rct),
                       Cell::number(rct - zq * n.se_o), Cell::number(rct + zq * n.se_o),
                       Cell::number(rwe), Cell::number(rwe - zq * n.se_r),
                       Cell::number(rwe + zq * n.se_r), Cell::boolean(shrunken)});
    ++n_kept;
    n_shrunken += shrunken;
  }
  rep.add_summary("n", Cell::number(n_kept));
  rep.add_summary("n_shrunken", Cell::number(n_shrunken));
  return rep;
}

namespace {

double draw_standard_normal(std::mt19937_64& rng) {
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
  return num::norm_quantile(u);
}

}  // namespace

std::vector<T1eCheck> run_t1e_checks(std::uint64_t seed, double alpha, int draws) {
  if (!(alpha > 0 && alpha < 0.5))
    throw std::domain_error("run_t1e_checks: alpha must lie in (0, 0.5)");
  if (draws < 1000) throw std::domain_error("run_t1e_checks: too few draws");
  constexpr std::array<double, 4> cs = {0.5, 1.0, 2.0, 10.0};
  constexpr std::array<double, 4> ts = {0.5, 1.0, 1.5, 2.0};
  std::vector<T1eCheck> out;
  for (const double c : cs) {
    const double t_alpha = controlled_threshold(alpha, c);
    long hits_alpha = 0;
    std::array<long, 4> hits_t = {0, 0, 0, 0};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < draws; ++i) {
      const double zo = draw_standard_normal(rng);
      const double zr = draw_standard_normal(rng);
      const ScepticalZ z = sceptical_z(zo, zr, c);
      if (!z.defined) continue;
      hits_alpha += z.zeta >= t_alpha;
      for (size_t k = 0; k < ts.size(); ++k) hits_t[k] += z.zeta >= ts[k];
    }
    auto push = [&](bool calibration, double param, long hits, double expected) {
      T1eCheck chk;
      chk.calibration = calibration;
      chk.c = c;
      chk.param = param;
      chk.mc = static_cast<double>(hits) / draws;
      chk.expected = expected;
      chk.three_se = 3.0 * std::sqrt(expected * (1.0 - expected) / draws);
      chk.pass = std::fabs(chk.mc - chk.expected) <= chk.three_se;
      out.push_back(chk);
    };
    push(true, alpha, hits_alpha, alpha * alpha);
    for (size_t k = 0; k < ts.size(); ++k)
      push(false, ts[k], hits_t[k], t1e_sceptical(ts[k], c));
  }
  return out;
}

Report cmd_verify_t1e(const RunConfig& config) {
  constexpr int kDraws = 1'000'000;
  const std::vector<T1eCheck> checks = run_t1e_checks(config.seed, config.alpha, kDraws);
  Report rep;
  rep.command = "verify-t1e";
  rep.add_config("seed", Cell::number(static_cast<double>(config.seed)));
  rep.add_config("alpha", Cell::number(config.alpha));
  rep.add_config("draws", Cell::number(kDraws));
  rep.table.columns = {"check", "c",        "param", "mc",
                       "expected", "abs_diff", "three_se", "pass"};
  bool all_pass = true;
  for (const T1eCheck& chk : checks) {
    rep.table.add_row({Cell::str(chk.calibration ? "calibration" : "t1e"),
                       Cell::number(chk.c), Cell::number(chk.param),
                       Cell::number(chk.mc), Cell::number(chk.expected),
                       Cell::number(std::fabs(chk.mc - chk.expected)),
                       Cell::number(chk.three_se), Cell::boolean(chk.pass)});
    all_pass = all_pass && chk.pass;
  }
  rep.add_summary("all_pass", Cell::boolean(all_pass));
  return rep;
}

namespace {

std::vector<SvgPoint> column_points(const Report& rep, const std::string& xcol,
                                    const std::string& ycol) {
  const auto& cols = rep.table.columns;
  const auto xi = std::find(cols.begin(), cols.end(), xcol) - cols.begin();
  const auto yi = std::find(cols.begin(), cols.end(), ycol) - cols.begin();
  std::vector<SvgPoint> pts;
  for (const auto& row : rep.table.rows) {
    SvgPoint p;
    p.x = row[xi].num;
    p.y = row[yi].num;
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

std::string render_report_svg(const std::string& command, const RunConfig& config,
                              const Report& report) {
  SvgOptions opt;
  std::vector<SvgSeries> series;
  if (command == "curves") {
    opt.title = "replication p-values as the precision ratio varies";
    opt.x_label = "c";
    opt.y_label = "p";
    opt.log_x = true;
    series.push_back({"sceptical", column_points(report, "c", "p_sceptical"), true});
    series.push_back({"two-trials", column_points(report, "c", "p_ttr"), true});
  } else if (command == "power-profile") {
    opt.title = "conditional power for " + config.study;
    opt.x_label = "hypothetical hazard ratio";
    opt.y_label = "conditional power (%)";
    series.push_back({"two-trials", column_points(report, "hr", "cp_ttr_pct"), true});
    series.push_back(
        {"sceptical", column_points(report, "hr", "cp_sceptical_pct"), true});
  } else if (command == "success-curve") {
    opt.title = "replication success across levels";
    opt.x_label = "alpha";
    opt.y_label = "proportion";
    series.push_back(
        {"success two-trials", column_points(report, "alpha", "prop_success_ttr"), true});
    series.push_back({"success sceptical",
                      column_points(report, "alpha", "prop_success_sceptical"), true});
    series.push_back({"mean pp two-trials",
                      column_points(report, "alpha", "avg_pp_ttr"), true});
    series.push_back({"mean pp sceptical",
                      column_points(report, "alpha", "avg_pp_sceptical"), true});
  } else if (command == "shrinkage") {
    opt.title = "margin-shifted estimates";
    opt.x_label = "emulation log-hr minus log margin";
    opt.y_label = "trial log-hr minus log margin";
    opt.diagonal = true;
    SvgSeries s;
    s.name = "study pairs";
    s.lines = false;
    const auto& cols = report.table.columns;
    const auto idx = [&cols](const char* name) {
      return std::find(cols.begin(), cols.end(), name) - cols.begin();
    };
    const auto xi = idx("rwe_shifted"), xlo = idx("rwe_lo"), xhi = idx("rwe_hi");
    const auto yi = idx("rct_shifted"), ylo = idx("rct_lo"), yhi = idx("rct_hi");
    for (const auto& row : report.table.rows) {
      SvgPoint p;
      p.x = row[xi].num;
      p.y = row[yi].num;
      p.x_lo = row[xlo].num;
      p.x_hi = row[xhi].num;
      p.y_lo = row[ylo].num;
      p.y_hi = row[yhi].num;
      s.points.push_back(p);
    }
    series.push_back(std::move(s));
  } else {
    return "";
  }
  return render_svg(opt, series);
}

namespace {

int emit(const RunConfig& config, const std::string& command, const Report& rep) {
  std::string payload;
  if (config.svg) {
    payload = render_report_svg(command, config, rep);
    if (payload.empty()) {
      std::cerr << "no chart defined for command '" << command << "'\n";
      return 2;
    }
  } else {
    std::ostringstream os;
    if (config.format == OutputFormat::csv)
      write_csv(rep, os);
    else
      write_json(rep, os);
    payload = os.str();
  }
  if (config.out.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open output file: " << config.out << "\n";
    return 2;
  }
  out << payload;
  return out ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"replication agreement of randomized trials and their real-world emulations"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string method_str = "controlled";
  std::string format_str = "csv";
  double c_value = 0;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", format_str, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "write to this file instead of stdout");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "dataset csv path, or 'bundled'")
        ->capture_default_str();
  };
  auto add_alpha = [&](CLI::App* sub) {
    return sub->add_option("--alpha", cfg.alpha, "one-sided level")
        ->check(CLI::Range(1e-6, 0.4999))
        ->capture_default_str();
  };

  CLI::App* assess = app.add_subcommand(
      "assess", "per-study replication p-values and success flags");
  add_data(assess);
  add_alpha(assess);
  assess->add_option("--method", method_str, "sceptical p-value flavour")
      ->check(CLI::IsMember({"controlled", "nominal", "both"}))
      ->capture_default_str();
  add_io(assess);

  CLI::App* power = app.add_subcommand(
      "power", "conditional and predictive power of each replication");
  add_data(power);
  add_alpha(power);
  add_io(power);

  CLI::App* ci = app.add_subcommand(
      "ci", "combined meta-analysis and sceptical confidence limits");
  add_data(ci);
  add_alpha(ci);
  add_io(ci);

  CLI::App* curves = app.add_subcommand(
      "curves", "sceptical vs two-trials p as the precision ratio varies");
  curves->add_option("--p-original", cfg.p_original, "one-sided p of the original")
      ->check(CLI::Range(1e-6, 0.4999))
      ->capture_default_str();
  curves->add_option("--rel-effect", cfg.rel_effect,
                     "replication effect relative to the original")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  curves->add_flag("--svg", cfg.svg, "emit an svg chart instead of the table");
  add_io(curves);

  CLI::App* profile = app.add_subcommand(
      "power-profile", "power across hypothetical original effects for one study");
  add_data(profile);
  profile->add_option("--study", cfg.study, "study label")->required();
  CLI::Option* c_opt = profile->add_option("--c", c_value, "precision ratio override")
                           ->check(CLI::PositiveNumber);
  add_alpha(profile);
  profile->add_flag("--svg", cfg.svg, "emit an svg chart instead of the table");
  add_io(profile);

  CLI::App* success = app.add_subcommand(
      "success-curve", "success proportions and mean predictive power across levels");
  add_data(success);
  success->add_flag("--svg", cfg.svg, "emit an svg chart instead of the table");
  add_io(success);

  CLI::App* shrink = app.add_subcommand(
      "shrinkage", "margin-shifted estimates of trial and emulation side by side");
  add_data(shrink);
  shrink->add_option("--exclude", cfg.exclude, "study label to drop (repeatable)");
  shrink->add_flag("--svg", cfg.svg, "emit an svg chart instead of the table");
  add_io(shrink);

  CLI::App* verify = app.add_subcommand(
      "verify-t1e", "Monte Carlo check of the calibrated error rates");
  CLI::Option* verify_alpha = add_alpha(verify);
  verify_alpha->default_str("0.1");
  verify->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
  add_io(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (verify->parsed() && verify_alpha->count() == 0) cfg.alpha = 0.1;
  if (c_opt->count() > 0) cfg.c = c_value;
  cfg.method = method_str == "nominal"
                   ? MethodChoice::nominal
                   : (method_str == "both" ? MethodChoice::both : MethodChoice::controlled);
  cfg.format = format_str == "json" ? OutputFormat::json : OutputFormat::csv;

  try {
    Report rep;
    std::string name;
    if (assess->parsed()) {
      rep = cmd_assess(cfg);
      name = "assess";
    } else if (power->parsed()) {
      rep = cmd_power(cfg);
      name = "power";
    } else if (ci->parsed()) {
      rep = cmd_ci(cfg);
      name = "ci";
    } else if (curves->parsed()) {
      rep = cmd_curves(cfg);
      name = "curves";
    } else if (profile->parsed()) {
      rep = cmd_power_profile(cfg);
      name = "power-profile";
    } else if (success->parsed()) {
      rep = cmd_success_curve(cfg);
      name = "success-curve";
    } else if (shrink->parsed()) {
      rep = cmd_shrinkage(cfg);
      name = "shrinkage";
    } else {
      rep = cmd_verify_t1e(cfg);
      name = "verify-t1e";
    }
    const int code = emit(cfg, name, rep);
    if (code != 0) return code;
    if (name == "verify-t1e")
      for (const auto& [key, value] : rep.summary)
        if (key == "all_pass" && !value.flag) return 3;
    return 0;
  } catch (const IngestError& e) {
    std::cerr << "input error (row " << e.row() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace replisure::cli
