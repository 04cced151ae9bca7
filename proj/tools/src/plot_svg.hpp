#pragma once

#include <string>
#include <vector>

namespace jtfu::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line chart: axes, tick labels, legend, one polyline per
// series. No external assets or services.
std::string svg_line_chart(const std::vector<PlotSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label);

} // namespace jtfu::cli
