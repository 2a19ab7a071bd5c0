#include "replisure/study_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "replisure/numerics.hpp"

namespace replisure {

double StudyEffect::log_hr() const { return std::log(hr); }

double StudyEffect::se() const { return se_from_ci(ci_lo, ci_hi, ci_level); }

double se_from_ci(double ci_lo, double ci_hi, double ci_level) {
  if (!(ci_lo > 0) || !(ci_hi > 0) || !std::isfinite(ci_lo) || !std::isfinite(ci_hi))
    throw std::invalid_argument("se_from_ci: interval limits must be positive and finite");
  if (!(ci_lo < ci_hi))
    throw std::invalid_argument("se_from_ci: interval limits must satisfy lo < hi");
  if (!(ci_level > 0 && ci_level < 1))
    throw std::invalid_argument("se_from_ci: ci_level must lie in (0, 1)");
  const double z = num::norm_quantile(0.5 * (1.0 + ci_level));
  return (std::log(ci_hi) - std::log(ci_lo)) / (2.0 * z);
}

double z_to_p(double z) {
  if (!std::isfinite(z)) throw std::domain_error("z_to_p: non-finite z");
  return num::norm_sf(z);
}

double p_to_z(double p) {
  if (!(p > 0 && p < 1))
    throw std::domain_error("p_to_z: p must lie strictly in (0, 1)");
  return -num::norm_quantile(p);
}

namespace {

void validate_effect(const StudyEffect& e, const std::string& which) {
  auto bad = [&which](const std::string& what) {
    throw std::invalid_argument(which + ": " + what);
  };
  if (!(e.hr > 0) || !std::isfinite(e.hr)) bad("hr must be positive and finite");
  if (!(e.ci_lo > 0) || !std::isfinite(e.ci_lo)) bad("ci_lo must be positive and finite");
  if (!(e.ci_hi > 0) || !std::isfinite(e.ci_hi)) bad("ci_hi must be positive and finite");
  if (!(e.ci_lo < e.ci_hi)) bad("confidence interval must satisfy lo < hi");
  if (!(e.ci_lo <= e.hr && e.hr <= e.ci_hi)) bad("hr must lie inside its confidence interval");
  if (!(e.ci_level > 0 && e.ci_level < 1)) bad("ci_level must lie in (0, 1)");
}

}  // namespace

void validate_pair(const StudyPair& pair) {
  if (pair.label.empty()) throw std::invalid_argument("label: must not be empty");
  if (!std::isfinite(pair.margin_hr) || !(pair.margin_hr > 0))
    throw std::invalid_argument("margin_hr: must be positive and finite");
  if (pair.design == Design::superiority && pair.margin_hr != 1.0)
    throw std::invalid_argument("margin_hr: superiority pairs must use margin 1");
  if (pair.design == Design::non_inferiority && !(pair.margin_hr > 1.0))
    throw std::invalid_argument("margin_hr: non-inferiority pairs need a margin above 1");
  validate_effect(pair.original, "original");
  validate_effect(pair.replication, "replication");
}

NormalizedPair normalize_pair(const StudyPair& pair) {
  validate_pair(pair);
  NormalizedPair n;
  n.delta = std::log(pair.margin_hr);
  n.theta_o = pair.original.log_hr();
  n.se_o = pair.original.se();
  n.theta_r = pair.replication.log_hr();
  n.se_r = pair.replication.se();
  n.z_o = (n.delta - n.theta_o) / n.se_o;
  n.z_r = (n.delta - n.theta_r) / n.se_r;
  n.c = (n.se_o * n.se_o) / (n.se_r * n.se_r);
  return n;
}

const StudyPair* Dataset::find(const std::string& label) const {
  for (const StudyPair& p : pairs)
    if (p.label == label) return &p;
  return nullptr;
}

IngestError::IngestError(int row, const std::string& message)
    : std::runtime_error(message), row_(row) {}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& field, int row, const std::string& name) {
  double v = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw IngestError(row, name + ": not a number: '" + field + "'");
  return v;
}

bool parse_bool(const std::string& field, int row, const std::string& name) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw IngestError(row, name + ": expected true or false, got '" + field + "'");
}

constexpr const char* kHeader =
    "label,design,margin_hr,rct_hr,rct_lo,rct_hi,rwe_hr,rwe_lo,rwe_hi,"
    "medicare_available";

}  // namespace

Dataset load_dataset(std::istream& in, const std::string& source_name) {
  Dataset ds;
  std::set<std::string> seen;
  std::string line;
  bool header_seen = false;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHeader)
        throw IngestError(0, source_name + ": unexpected header: '" + line + "'");
      header_seen = true;
      continue;
    }
    ++row;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 10)
      throw IngestError(row, "expected 10 fields, got " + std::to_string(f.size()));
    StudyPair p;
    p.label = f[0];
    if (f[1] == "sup")
      p.design = Design::superiority;
    else if (f[1] == "ni")
      p.design = Design::non_inferiority;
    else
      throw IngestError(row, "design: expected sup or ni, got '" + f[1] + "'");
    p.margin_hr = parse_double(f[2], row, "margin_hr");
    p.original.hr = parse_double(f[3], row, "rct_hr");
    p.original.ci_lo = parse_double(f[4], row, "rct_lo");
    p.original.ci_hi = parse_double(f[5], row, "rct_hi");
    p.replication.hr = parse_double(f[6], row, "rwe_hr");
    p.replication.ci_lo = parse_double(f[7], row, "rwe_lo");
    p.replication.ci_hi = parse_double(f[8], row, "rwe_hi");
    p.medicare_available = parse_bool(f[9], row, "medicare_available");
    if (!seen.insert(p.label).second)
      throw IngestError(row, "duplicate label '" + p.label + "'");
    try {
      validate_pair(p);
    } catch (const std::invalid_argument& e) {
      throw IngestError(row, p.label + ": " + e.what());
    }
    ds.pairs.push_back(std::move(p));
  }
  if (!header_seen)
    throw IngestError(0, source_name + ": no header line found");
  if (ds.pairs.empty())
    throw IngestError(0, source_name + ": no data rows");
  return ds;
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(0, "cannot open dataset file: " + path);
  return load_dataset(in, path);
}

Dataset load_bundled_dataset() {
  std::istringstream in(bundled_dataset_csv());
  return load_dataset(in, "bundled");
}

}  // namespace replisure
