#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "bondgauge/csv.hpp"

namespace bondgauge {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained line chart; enough to eyeball the experiment outputs
/// without external plotting tools.
inline std::string render_svg_lines(const std::string& title, const std::string& x_label,
                                    const std::string& y_label, const std::vector<SvgSeries>& series) {
  constexpr int kW = 640;
  constexpr int kH = 420;
  constexpr int kMarginL = 70;
  constexpr int kMarginR = 20;
  constexpr int kMarginT = 40;
  constexpr int kMarginB = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        first = false;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, s.y[i]);
        y_max = std::max(y_max, s.y[i]);
      }
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const auto px = [&](double x) {
    return kMarginL + (x - x_min) / (x_max - x_min) * (kW - kMarginL - kMarginR);
  };
  const auto py = [&](double y) {
    return kH - kMarginB - (y - y_min) / (y_max - y_min) * (kH - kMarginT - kMarginB);
  };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << kW / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title << "</text>\n";
  svg << "<line x1='" << kMarginL << "' y1='" << kH - kMarginB << "' x2='" << kW - kMarginR << "' y2='"
      << kH - kMarginB << "' stroke='black'/>\n";
  svg << "<line x1='" << kMarginL << "' y1='" << kMarginT << "' x2='" << kMarginL << "' y2='"
      << kH - kMarginB << "' stroke='black'/>\n";
  svg << "<text x='" << kW / 2 << "' y='" << kH - 12 << "' text-anchor='middle' font-size='12'>" << x_label
      << "</text>\n";
  svg << "<text x='16' y='" << kH / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
      << kH / 2 << ")'>" << y_label << "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double tx = x_min + (x_max - x_min) * tick / 4.0;
    const double ty = y_min + (y_max - y_min) * tick / 4.0;
    svg << "<text x='" << px(tx) << "' y='" << kH - kMarginB + 16
        << "' text-anchor='middle' font-size='10'>" << fmt_double(std::round(tx * 1000.0) / 1000.0)
        << "</text>\n";
    svg << "<text x='" << kMarginL - 6 << "' y='" << py(ty) + 3
        << "' text-anchor='end' font-size='10'>" << fmt_double(std::round(ty * 1000.0) / 1000.0)
        << "</text>\n";
  }
  int color = 0;
  for (const auto& s : series) {
    svg << "<polyline fill='none' stroke='" << kColors[color % 5] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    svg << "'/>\n";
    svg << "<text x='" << kW - kMarginR - 6 << "' y='" << kMarginT + 14 + 14 * color
        << "' text-anchor='end' font-size='11' fill='" << kColors[color % 5] << "'>" << s.label
        << "</text>\n";
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bondgauge
