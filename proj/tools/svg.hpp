#pragma once

// Minimal self-contained SVG line plots (no plotting dependency): one or two
// series, linear or log axes, deterministic formatting.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgls_cli {

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f6fb2";
};

namespace svg_detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace svg_detail

inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
  constexpr double width = 640.0, height = 480.0;
  constexpr double ml = 70.0, mr = 20.0, mt = 40.0, mb = 55.0;
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  const auto tx = [log_x](double v) { return log_x ? std::log10(v) : v; };
  const auto ty = [log_y](double v) { return log_y ? std::log10(v) : v; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((log_x && !(s.x[i] > 0.0)) || (log_y && !(s.y[i] > 0.0))) continue;
      x_lo = std::min(x_lo, tx(s.x[i]));
      x_hi = std::max(x_hi, tx(s.x[i]));
      y_lo = std::min(y_lo, ty(s.y[i]));
      y_hi = std::max(y_hi, ty(s.y[i]));
    }
  }
  if (!(x_lo <= x_hi) || !(y_lo <= y_hi)) {
    throw std::runtime_error("write_svg_plot: no plottable points");
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const auto px = [&](double v) {
    return ml + (tx(v) - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  const auto py = [&](double v) {
    return height - mb - (ty(v) - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
      << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << svg_detail::num(ml) << "\" y1=\"" << svg_detail::num(height - mb)
      << "\" x2=\"" << svg_detail::num(width - mr) << "\" y2=\""
      << svg_detail::num(height - mb) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << svg_detail::num(ml) << "\" y1=\"" << svg_detail::num(mt)
      << "\" x2=\"" << svg_detail::num(ml) << "\" y2=\"" << svg_detail::num(height - mb)
      << "\" stroke=\"black\"/>\n";
  // ticks
  constexpr int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / n_ticks;
    const double fy = y_lo + (y_hi - y_lo) * i / n_ticks;
    const double vx = log_x ? std::pow(10.0, fx) : fx;
    const double vy = log_y ? std::pow(10.0, fy) : fy;
    const double gx = ml + (width - ml - mr) * i / n_ticks;
    const double gy = height - mb - (height - mt - mb) * i / n_ticks;
    out << "<line x1=\"" << svg_detail::num(gx) << "\" y1=\"" << svg_detail::num(height - mb)
        << "\" x2=\"" << svg_detail::num(gx) << "\" y2=\""
        << svg_detail::num(height - mb + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << svg_detail::num(gx) << "\" y=\"" << svg_detail::num(height - mb + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg_detail::num(vx) << "</text>\n";
    out << "<line x1=\"" << svg_detail::num(ml - 5) << "\" y1=\"" << svg_detail::num(gy)
        << "\" x2=\"" << svg_detail::num(ml) << "\" y2=\"" << svg_detail::num(gy)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << svg_detail::num(ml - 8) << "\" y=\"" << svg_detail::num(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg_detail::num(vy) << "</text>\n";
  }
  out << "<text x=\"" << svg_detail::num((ml + width - mr) / 2.0) << "\" y=\""
      << svg_detail::num(height - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << svg_detail::num((mt + height - mb) / 2.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << svg_detail::num((mt + height - mb) / 2.0) << ")\">" << y_label << "</text>\n";
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((log_x && !(s.x[i] > 0.0)) || (log_y && !(s.y[i] > 0.0))) continue;
      if (!first) out << ' ';
      out << svg_detail::num(px(s.x[i])) << ',' << svg_detail::num(py(s.y[i]));
      first = false;
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((log_x && !(s.x[i] > 0.0)) || (log_y && !(s.y[i] > 0.0))) continue;
      out << "<circle cx=\"" << svg_detail::num(px(s.x[i])) << "\" cy=\""
          << svg_detail::num(py(s.y[i])) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace bgls_cli
