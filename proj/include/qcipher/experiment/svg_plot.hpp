// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// Static SVG line charts from sweep or curve CSVs (linear or log axes).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qcipher/experiment/csv.hpp"

namespace qcipher::experiment {

struct PlotSpec {
  std::string x = "value";
  std::vector<std::string> y;        // wide form: columns to draw
  std::vector<std::string> metrics;  // long form: metric filter (empty = all)
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

namespace detail {

inline double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("plot: non-numeric " + what + " '" + s + "'");
  }
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// Long form (metric/estimate columns) groups by metric; wide form draws `spec.y`.
inline std::vector<Series> series_from_table(const CsvTable& t, const PlotSpec& spec) {
  const int xc = t.column(spec.x);
  if (xc < 0) throw ValidationError("plot: missing x column '" + spec.x + "'");
  std::vector<Series> out;
  if (spec.y.empty()) {
    const int mc = t.column("metric");
    const int ec = t.column("estimate");
    if (mc < 0 || ec < 0) throw ValidationError("plot: no y columns given and CSV lacks 'metric'/'estimate' columns");
    std::map<std::string, std::size_t> index;
    for (const auto& row : t.rows) {
      const auto& m = row[static_cast<std::size_t>(mc)];
      if (!spec.metrics.empty() && std::find(spec.metrics.begin(), spec.metrics.end(), m) == spec.metrics.end()) continue;
      auto [it, fresh] = index.emplace(m, out.size());
      if (fresh) out.push_back({m, {}});
      out[it->second].points.emplace_back(detail::parse_number(row[static_cast<std::size_t>(xc)], "x value"),
                                          detail::parse_number(row[static_cast<std::size_t>(ec)], "estimate"));
    }
    for (const auto& m : spec.metrics)
      if (!index.contains(m)) throw ValidationError("plot: metric '" + m + "' not present in CSV");
  } else {
    for (const auto& col : spec.y) {
      const int yc = t.column(col);
      if (yc < 0) throw ValidationError("plot: missing y column '" + col + "'");
      Series s{col, {}};
      for (const auto& row : t.rows)
        s.points.emplace_back(detail::parse_number(row[static_cast<std::size_t>(xc)], "x value"),
                              detail::parse_number(row[static_cast<std::size_t>(yc)], col));
      out.push_back(std::move(s));
    }
  }
  if (out.empty()) throw ValidationError("plot: nothing to draw");
  return out;
}

inline std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](const std::pair<double, double>& p) {
    return std::isfinite(p.first) && std::isfinite(p.second) && (!spec.log_x || p.first > 0.0) && (!spec.log_y || p.second > 0.0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t dropped = 0;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (!usable(p)) {
        ++dropped;
        continue;
      }
      x0 = std::min(x0, tx(p.first));
      x1 = std::max(x1, tx(p.first));
      y0 = std::min(y0, ty(p.second));
      y1 = std::max(y1, ty(p.second));
    }
  if (!std::isfinite(x0)) throw ValidationError("plot: no drawable points (check log axes against nonpositive data)");
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const double pad_y = 0.05 * (y1 - y0);
  y0 -= pad_y;
  y1 += pad_y;

  const double left = 80, right = 200, top = 40, bottom = 60;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    o << "<text x=\"" << detail::num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::escape_xml(spec.title) << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << detail::num(pw) << "\" height=\"" << detail::num(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [](double lo, double hi, bool log) {
    std::vector<double> t;
    if (log) {
      for (double e = std::ceil(lo); e <= std::floor(hi) + 1e-9; e += std::max(1.0, std::floor((hi - lo) / 8.0))) t.push_back(e);
      if (t.empty()) t = {lo, hi};
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
    }
    return t;
  };
  for (double t : ticks(x0, x1, spec.log_x)) {
    const double x = left + (t - x0) / (x1 - x0) * pw;
    o << "<line x1=\"" << detail::num(x) << "\" y1=\"" << detail::num(top + ph) << "\" x2=\"" << detail::num(x) << "\" y2=\""
      << detail::num(top + ph + 5) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << detail::num(x) << "\" y=\"" << detail::num(top + ph + 18) << "\" text-anchor=\"middle\">"
      << detail::tick_label(spec.log_x ? std::pow(10.0, t) : t) << "</text>\n";
  }
  for (double t : ticks(y0, y1, spec.log_y)) {
    const double y = top + ph - (t - y0) / (y1 - y0) * ph;
    o << "<line x1=\"" << detail::num(left - 5) << "\" y1=\"" << detail::num(y) << "\" x2=\"" << detail::num(left) << "\" y2=\""
      << detail::num(y) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << detail::num(left - 8) << "\" y=\"" << detail::num(y + 4) << "\" text-anchor=\"end\">"
      << detail::tick_label(spec.log_y ? std::pow(10.0, t) : t) << "</text>\n";
  }
  const std::string xl = spec.x_label.empty() ? spec.x : spec.x_label;
  o << "<text x=\"" << detail::num(left + pw / 2) << "\" y=\"" << spec.height - 16 << "\" text-anchor=\"middle\">"
    << detail::escape_xml(xl + (spec.log_x ? " (log)" : "")) << "</text>\n";
  if (!spec.y_label.empty() || spec.log_y)
    o << "<text transform=\"translate(18," << detail::num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::escape_xml(spec.y_label + (spec.log_y ? " (log)" : "")) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : series[k].points)
      if (usable(p)) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    o << "<polyline class=\"series\" data-name=\"" << detail::escape_xml(series[k].name) << "\" fill=\"none\" stroke=\""
      << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      o << (i ? " " : "") << detail::num(px(pts[i].first)) << ',' << detail::num(py(pts[i].second));
    o << "\"/>\n";
    for (const auto& p : pts)
      o << "<circle cx=\"" << detail::num(px(p.first)) << "\" cy=\"" << detail::num(py(p.second)) << "\" r=\"2.5\" fill=\""
        << color << "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    o << "<g class=\"legend\"><line x1=\"" << detail::num(left + pw + 12) << "\" y1=\"" << detail::num(ly - 4) << "\" x2=\""
      << detail::num(left + pw + 32) << "\" y2=\"" << detail::num(ly - 4) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/><text x=\"" << detail::num(left + pw + 36) << "\" y=\"" << detail::num(ly) << "\">"
      << detail::escape_xml(series[k].name) << "</text></g>\n";
  }
  if (dropped > 0)
    o << "<!-- " << dropped << " nonpositive or non-finite points omitted on log axes -->\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace qcipher::experiment
