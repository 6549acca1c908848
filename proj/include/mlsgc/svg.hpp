#ifndef MLSGC_SVG_HPP
#define MLSGC_SVG_HPP

// Self-contained SVG figures rendered from sweep rows. The output depends
// only on the rows passed in, so re-rendering from a CSV file reproduces the
// same bytes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mlsgc/experiments.hpp"

namespace mlsgc {

namespace svg {

inline constexpr double kWidth = 460.0;
inline constexpr double kHeight = 420.0;
inline constexpr double kLeft = 60.0;
inline constexpr double kTop = 40.0;
inline constexpr double kSize = 320.0;

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

/// Piecewise-linear viridis approximation on [0, 1].
inline std::string colour(double v) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  v = std::clamp(v, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(v));
  const double f = v - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

inline double px(double x) { return kLeft + x * kSize; }
inline double py(double y) { return kTop + (1.0 - y) * kSize; }

inline std::string header(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
    << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(kLeft + kSize / 2) << "\" y=\"22\" text-anchor=\"middle\">" << title << "</text>\n";
  return s.str();
}

inline std::string axes(const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream s;
  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kSize) << "\" height=\"" << num(kSize)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    s << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kTop + kSize + 16) << "\" text-anchor=\"middle\">" << num(t)
      << "</text>\n";
    s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">" << num(t)
      << "</text>\n";
  }
  s << "<text x=\"" << num(kLeft + kSize / 2) << "\" y=\"" << num(kTop + kSize + 34) << "\" text-anchor=\"middle\">"
    << xlabel << "</text>\n";
  s << "<text x=\"16\" y=\"" << num(kTop + kSize / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << num(kTop + kSize / 2) << ")\">" << ylabel << "</text>\n";
  return s.str();
}

inline std::string colour_bar() {
  std::ostringstream s;
  const double x = kLeft + kSize + 20;
  for (int i = 0; i < 20; ++i) {
    const double v0 = i / 20.0;
    s << "<rect x=\"" << num(x) << "\" y=\"" << num(py(v0 + 0.05)) << "\" width=\"14\" height=\"" << num(kSize / 20)
      << "\" fill=\"" << colour(v0 + 0.025) << "\"/>\n";
  }
  for (double t : {1.0 / 3.0, 0.5, 1.0})
    s << "<text x=\"" << num(x + 18) << "\" y=\"" << num(py(t) + 4) << "\">" << num(t) << "</text>\n";
  return s.str();
}

/// Cell width from the spacing of the grid values.
inline double cell_width(const std::set<double>& values) {
  if (values.size() < 2) return 0.1;
  const std::vector<double> v(values.begin(), values.end());
  double w = 1.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) w = std::min(w, v[i + 1] - v[i]);
  return w;
}

inline std::string heat_cells(const std::vector<std::array<double, 3>>& cells) {
  std::set<double> xs, ys;
  for (const auto& c : cells) {
    xs.insert(c[0]);
    ys.insert(c[1]);
  }
  const double wx = cell_width(xs), wy = cell_width(ys);
  std::ostringstream s;
  for (const auto& c : cells) {
    const double x0 = std::max(0.0, c[0] - wx / 2), x1 = std::min(1.0, c[0] + wx / 2);
    const double y0 = std::max(0.0, c[1] - wy / 2), y1 = std::min(1.0, c[1] + wy / 2);
    s << "<rect x=\"" << num(px(x0)) << "\" y=\"" << num(py(y1)) << "\" width=\"" << num((x1 - x0) * kSize)
      << "\" height=\"" << num((y1 - y0) * kSize) << "\" fill=\"" << colour(c[2]) << "\"/>\n";
  }
  return s.str();
}

/// Segment of { (p1, p2) in [0,1]^2 : w1 p1 + (1 - w1) p2 = t }.
inline std::optional<std::array<double, 4>> level_line(double w1, double t) {
  const double w2 = 1.0 - w1;
  std::vector<std::array<double, 2>> pts;
  const auto add = [&](double x, double y) {
    if (x >= -1e-12 && x <= 1 + 1e-12 && y >= -1e-12 && y <= 1 + 1e-12) pts.push_back({x, y});
  };
  if (w2 > 0) {
    add(0.0, t / w2);
    add(1.0, (t - w1) / w2);
  }
  if (w1 > 0) {
    add(t / w1, 0.0);
    add((t - w2) / w1, 1.0);
  }
  if (pts.size() < 2) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  return std::array<double, 4>{(*lo)[0], (*lo)[1], (*hi)[0], (*hi)[1]};
}

inline std::string line(const std::array<double, 4>& seg, const char* stroke, const char* dash) {
  std::ostringstream s;
  s << "<line x1=\"" << num(px(seg[0])) << "\" y1=\"" << num(py(seg[1])) << "\" x2=\"" << num(px(seg[2])) << "\" y2=\""
    << num(py(seg[3])) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"";
  if (dash[0] != '\0') s << " stroke-dasharray=\"" << dash << '"';
  s << "/>\n";
  return s.str();
}

inline std::string universal_square(double u) {
  if (!(u > 0.0)) return {};
  const double side = std::min(u, 1.0);
  std::ostringstream s;
  s << "<rect x=\"" << num(px(0)) << "\" y=\"" << num(py(side)) << "\" width=\"" << num(side * kSize) << "\" height=\""
    << num(side * kSize) << "\" fill=\"none\" stroke=\"white\" stroke-width=\"2\" stroke-dasharray=\"2 3\"/>\n";
  return s.str();
}

}  // namespace svg

/// Detectability heatmap over (p1, p2) for one aggregation weight, with the
/// t_LB and t_UB level lines and the universal-bound square overlaid.
inline std::string render_noise_svg(const std::vector<NoiseCell>& rows, double w1) {
  std::vector<std::array<double, 3>> cells;
  double lb = 0.0, ub = 0.0, ulb = 0.0;
  for (const auto& r : rows) {
    if (r.w1 != w1) continue;
    cells.push_back({r.p1, r.p2, r.detect_mean});
    lb += r.t_lb;
    ub += r.t_ub;
    ulb += r.universal_lb;
  }
  if (cells.empty()) throw InvalidArgument("render_noise_svg: no rows for w1=" + svg::num(w1));
  const double m = static_cast<double>(cells.size());
  lb /= m;
  ub /= m;
  ulb /= m;

  std::string out = svg::header("detectability, w = (" + svg::num(w1) + ", " + svg::num(1.0 - w1) + ")");
  out += svg::heat_cells(cells);
  if (auto seg = svg::level_line(w1, lb)) out += svg::line(*seg, "red", "");
  if (auto seg = svg::level_line(w1, ub)) out += svg::line(*seg, "orange", "6 4");
  out += svg::universal_square(ulb);
  out += svg::axes("p1", "p2");
  out += svg::colour_bar();
  out += "</svg>\n";
  return out;
}

inline std::string render_geomean_svg(const std::vector<GeoMeanCell>& rows) {
  if (rows.empty()) throw InvalidArgument("render_geomean_svg: no rows");
  std::vector<std::array<double, 3>> cells;
  double ulb = 0.0;
  for (const auto& r : rows) {
    cells.push_back({r.p1, r.p2, r.detect_geomean});
    ulb += r.universal_lb;
  }
  ulb /= static_cast<double>(rows.size());
  std::string out = svg::header("geometric mean of detectability over weights");
  out += svg::heat_cells(cells);
  out += svg::universal_square(ulb);
  out += svg::axes("p1", "p2");
  out += svg::colour_bar();
  out += "</svg>\n";
  return out;
}

/// Detectability against w1 with the predicted critical weight marked.
inline std::string render_weight_svg(const WeightSweepResult& res) {
  if (res.points.empty()) throw InvalidArgument("render_weight_svg: no points");
  const auto& first = res.points.front();
  std::string out = svg::header("detectability vs w1, (p1, p2) = (" + svg::num(first.p1) + ", " + svg::num(first.p2) + ")");
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"#3b528b\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < res.points.size(); ++i)
    s << (i ? " " : "") << svg::num(svg::px(res.points[i].w1)) << ',' << svg::num(svg::py(res.points[i].detect_mean));
  s << "\"/>\n";
  for (const auto& p : res.points) {
    const double lo = std::max(0.0, p.detect_mean - p.detect_std), hi = std::min(1.0, p.detect_mean + p.detect_std);
    s << "<line x1=\"" << svg::num(svg::px(p.w1)) << "\" y1=\"" << svg::num(svg::py(lo)) << "\" x2=\""
      << svg::num(svg::px(p.w1)) << "\" y2=\"" << svg::num(svg::py(hi)) << "\" stroke=\"#3b528b\" stroke-width=\"1\"/>\n";
    s << "<circle cx=\"" << svg::num(svg::px(p.w1)) << "\" cy=\"" << svg::num(svg::py(p.detect_mean))
      << "\" r=\"3\" fill=\"#3b528b\"/>\n";
  }
  if (res.predicted.w1) {
    s << svg::line({*res.predicted.w1, 0.0, *res.predicted.w1, 1.0}, "red", "6 4");
    s << "<text x=\"" << svg::num(svg::px(*res.predicted.w1) + 4) << "\" y=\"" << svg::num(svg::py(0.05))
      << "\" fill=\"red\">w1* = " << svg::num(*res.predicted.w1) << "</text>\n";
  }
  out += s.str();
  out += svg::axes("w1", "detectability");
  out += "</svg>\n";
  return out;
}

}  // namespace mlsgc

#endif  // MLSGC_SVG_HPP
