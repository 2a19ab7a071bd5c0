#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace replisure {

// One typed table cell.  Numbers print with shortest round-trip precision;
// p-values additionally follow the "< 0.0001" display convention in csv
// output while staying plain numbers in json.
struct Cell {
  enum class Kind { number, p_value, text, boolean, missing };

  Kind kind = Kind::missing;
  double num = 0;
  std::string text;
  bool flag = false;

  static Cell number(double v);
  static Cell p_value(double v);
  static Cell str(std::string v);
  static Cell boolean(bool v);
  static Cell na();
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> cells);  // must match the column count
};

// A command's complete output: the echoed configuration, the table itself and
// summary key/value lines.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> config;
  Table table;
  std::vector<std::pair<std::string, Cell>> summary;

  void add_config(const std::string& key, Cell value);
  void add_summary(const std::string& key, Cell value);
};

std::string format_double(double v);   // shortest representation that round-trips
std::string format_p_value(double p);  // "< 0.0001" below 1e-4

void write_csv(const Report& r, std::ostream& out);
void write_json(const Report& r, std::ostream& out);

// Minimal self-contained svg line / scatter charts.
struct SvgPoint {
  double x = 0;
  double y = 0;
  double x_lo = std::numeric_limits<double>::quiet_NaN();
  double x_hi = std::numeric_limits<double>::quiet_NaN();
  double y_lo = std::numeric_limits<double>::quiet_NaN();
  double y_hi = std::numeric_limits<double>::quiet_NaN();
};

struct SvgSeries {
  std::string name;
  std::vector<SvgPoint> points;
  bool lines = true;  // polyline when set, markers otherwise
};

struct SvgOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool diagonal = false;  // draw the y = x reference line
  int width = 720;
  int height = 480;
};

std::string render_svg(const SvgOptions& options, const std::vector<SvgSeries>& series);

}  // namespace replisure
