#include "replisure/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace replisure {

Cell Cell::number(double v) {
  Cell c;
  c.kind = Kind::number;
  c.num = v;
  return c;
}

Cell Cell::p_value(double v) {
  Cell c;
  c.kind = Kind::p_value;
  c.num = v;
  return c;
}

Cell Cell::str(std::string v) {
  Cell c;
  c.kind = Kind::text;
  c.text = std::move(v);
  return c;
}

Cell Cell::boolean(bool v) {
  Cell c;
  c.kind = Kind::boolean;
  c.flag = v;
  return c;
}

Cell Cell::na() { return Cell{}; }

void Table::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("Table::add_row: cell count does not match columns");
  rows.push_back(std::move(cells));
}

void Report::add_config(const std::string& key, Cell value) {
  config.emplace_back(key, std::move(value));
}

void Report::add_summary(const std::string& key, Cell value) {
  summary.emplace_back(key, std::move(value));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string format_p_value(double p) {
  if (std::isnan(p)) return "NA";
  if (p < 1e-4) return "< 0.0001";
  return format_double(p);
}

namespace {

std::string csv_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::number:
      return format_double(c.num);
    case Cell::Kind::p_value:
      return format_p_value(c.num);
    case Cell::Kind::text:
      return c.text;
    case Cell::Kind::boolean:
      return c.flag ? "true" : "false";
    case Cell::Kind::missing:
      return "NA";
  }
  return "NA";
}

nlohmann::ordered_json json_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::number:
    case Cell::Kind::p_value:
      if (std::isnan(c.num)) return nullptr;
      return c.num;
    case Cell::Kind::text:
      return c.text;
    case Cell::Kind::boolean:
      return c.flag;
    case Cell::Kind::missing:
      return nullptr;
  }
  return nullptr;
}

}  // namespace

void write_csv(const Report& r, std::ostream& out) {
  out << "# command," << r.command << "\n";
  for (const auto& [key, value] : r.config)
    out << "# " << key << "," << csv_cell(value) << "\n";
  for (size_t i = 0; i < r.table.columns.size(); ++i)
    out << (i ? "," : "") << r.table.columns[i];
  out << "\n";
  for (const auto& row : r.table.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
  for (const auto& [key, value] : r.summary)
    out << "# " << key << "," << csv_cell(value) << "\n";
}

void write_json(const Report& r, std::ostream& out) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : r.config) config[key] = json_cell(value);
  j["config"] = std::move(config);
  j["columns"] = r.table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [key, value] : r.summary) summary[key] = json_cell(value);
  j["summary"] = std::move(summary);
  out << j.dump(2) << "\n";
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#8c564b", "#ff7f0e"};

struct Range {
  double lo = 0, hi = 1;

  void widen(double v) {
    if (std::isnan(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

std::string fmt_tick(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const SvgOptions& opt, const std::vector<SvgSeries>& series) {
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = opt.width - left - right;
  const double plot_h = opt.height - top - bottom;

  auto tx = [&opt](double x) { return opt.log_x ? std::log10(x) : x; };

  bool have = false;
  Range rx, ry;
  for (const SvgSeries& s : series)
    for (const SvgPoint& p : s.points) {
      if (std::isnan(p.x) || std::isnan(p.y)) continue;
      if (!have) {
        rx = {tx(p.x), tx(p.x)};
        ry = {p.y, p.y};
        have = true;
      }
      rx.widen(tx(p.x));
      ry.widen(p.y);
      if (!std::isnan(p.x_lo)) rx.widen(tx(p.x_lo));
      if (!std::isnan(p.x_hi)) rx.widen(tx(p.x_hi));
      ry.widen(p.y_lo);
      ry.widen(p.y_hi);
    }
  if (!have) {
    rx = {0, 1};
    ry = {0, 1};
  }
  auto pad = [](Range& r) {
    const double span = r.hi - r.lo;
    const double margin = span > 0 ? 0.05 * span : 0.5;
    r.lo -= margin;
    r.hi += margin;
  };
  pad(rx);
  pad(ry);

  auto sx = [&](double x) { return left + (tx(x) - rx.lo) / (rx.hi - rx.lo) * plot_w; };
  auto sy = [&](double y) { return top + (ry.hi - y) / (ry.hi - ry.lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width << " "
      << opt.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(opt.title)
      << "</text>\n";

  // axes and ticks
  svg << "<g stroke=\"#444\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h << "\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
    const double px = left + plot_w * i / 5.0;
    const double label = opt.log_x ? std::pow(10.0, fx) : fx;
    svg << "<line x1=\"" << px << "\" y1=\"" << top + plot_h << "\" x2=\"" << px
        << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << fmt_tick(label) << "</text>\n";
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
    const double py = sy(fy);
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << left
        << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << opt.height - 10
      << "\" text-anchor=\"middle\">" << xml_escape(opt.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\">" << xml_escape(opt.y_label) << "</text>\n";
  svg << "</g>\n";

  if (opt.diagonal) {
    const double lo = std::max(rx.lo, ry.lo);
    const double hi = std::min(rx.hi, ry.hi);
    if (lo < hi && !opt.log_x)
      svg << "<line x1=\"" << left + (lo - rx.lo) / (rx.hi - rx.lo) * plot_w
          << "\" y1=\"" << sy(lo) << "\" x2=\""
          << left + (hi - rx.lo) / (rx.hi - rx.lo) * plot_w << "\" y2=\"" << sy(hi)
          << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
  }

  for (size_t si = 0; si < series.size(); ++si) {
    const SvgSeries& s = series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
    if (s.lines) {
      bool open = false;
      std::ostringstream pts;
      for (const SvgPoint& p : s.points) {
        if (std::isnan(p.x) || std::isnan(p.y)) {
          if (open)
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
          pts.str("");
          open = false;
          continue;
        }
        pts << sx(p.x) << "," << sy(p.y) << " ";
        open = true;
      }
      if (open)
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
    } else {
      for (const SvgPoint& p : s.points) {
        if (std::isnan(p.x) || std::isnan(p.y)) continue;
        if (!std::isnan(p.x_lo) && !std::isnan(p.x_hi))
          svg << "<line x1=\"" << sx(p.x_lo) << "\" y1=\"" << sy(p.y) << "\" x2=\""
              << sx(p.x_hi) << "\" y2=\"" << sy(p.y) << "\" stroke=\"" << color
              << "\" stroke-width=\"0.8\" opacity=\"0.6\"/>\n";
        if (!std::isnan(p.y_lo) && !std::isnan(p.y_hi))
          svg << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y_lo) << "\" x2=\""
              << sx(p.x) << "\" y2=\"" << sy(p.y_hi) << "\" stroke=\"" << color
              << "\" stroke-width=\"0.8\" opacity=\"0.6\"/>\n";
        svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    svg << "<text x=\"" << left + plot_w - 8 << "\" y=\"" << top + 16 + 16 * si
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << color << "\">" << xml_escape(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace replisure
