#include "plot_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jtfu::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8d5a97",
                          "#c77b25", "#4f6d7a", "#a63d40", "#2f8f9d"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// round the raw interval up to a 1/2/5 ladder step
double nice_step(double span, int ticks) {
  const double raw = span / std::max(1, ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.0) step = 1.0;
  else if (frac <= 2.0) step = 2.0;
  else if (frac <= 5.0) step = 5.0;
  return step * mag;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double map(double v, double pix_lo, double pix_hi) const {
    const double t = (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

Range data_range(const std::vector<PlotSeries>& series, bool use_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const PlotSeries& s : series)
    for (double v : use_x ? s.x : s.y) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo <= hi)) throw std::invalid_argument("plot has no numeric data");
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

} // namespace

std::string svg_line_chart(const std::vector<PlotSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
  if (series.empty()) throw std::invalid_argument("plot needs at least one series");
  const Range xr = data_range(series, true);
  const Range yr = data_range(series, false);
  const double px0 = kLeft, px1 = kWidth - kRight;
  const double py0 = kHeight - kBottom, py1 = kTop;  // y grows upward

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // gridlines and tick labels on the 1/2/5 ladder
  const double xstep = nice_step(xr.hi - xr.lo, 8);
  for (double v = std::ceil(xr.lo / xstep) * xstep; v <= xr.hi + 1e-12 * xstep;
       v += xstep) {
    const double px = xr.map(v, px0, px1);
    svg << "<line x1=\"" << num(px) << "\" y1=\"" << py0 << "\" x2=\"" << num(px)
        << "\" y2=\"" << py1 << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << num(px) << "\" y=\"" << py0 + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(v) << "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo, 8);
  for (double v = std::ceil(yr.lo / ystep) * ystep; v <= yr.hi + 1e-12 * ystep;
       v += ystep) {
    const double py = yr.map(v, py0, py1);
    svg << "<line x1=\"" << px0 << "\" y1=\"" << num(py) << "\" x2=\"" << px1
        << "\" y2=\"" << num(py) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << px0 - 8 << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(v) << "</text>\n";
  }

  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1
      << "\" y2=\"" << py0 << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px0
      << "\" y2=\"" << py1 << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (py0 + py1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << (py0 + py1) / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      svg << num(xr.map(series[s].x[i], px0, px1)) << ","
          << num(yr.map(series[s].y[i], py0, py1)) << " ";
    svg << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      svg << "<circle cx=\"" << num(xr.map(series[s].x[i], px0, px1)) << "\" cy=\""
          << num(yr.map(series[s].y[i], py0, py1)) << "\" r=\"2.4\" fill=\""
          << color << "\"/>\n";
    if (!series[s].label.empty()) {
      const double ly = kTop + 16.0 * double(s);
      svg << "<line x1=\"" << px1 - 110 << "\" y1=\"" << ly << "\" x2=\""
          << px1 - 88 << "\" y2=\"" << ly << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << px1 - 82 << "\" y=\"" << ly + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace jtfu::cli
