#include "jtfu/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jtfu {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

ConvergenceSeries parse_convergence_series(std::istream& in) {
  ConvergenceSeries series;
  std::string line;
  bool first_content = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;

    std::string body = line.substr(start);
    for (char& ch : body)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';

    std::istringstream fields(body);
    int m = 0;
    double value = 0.0;
    if (fields >> m >> value) {
      series.points.push_back({m, value});
    } else if (first_content) {
      // tolerate a single header line such as "m,value"
    } else {
      throw std::runtime_error("malformed series row: " + line);
    }
    first_content = false;
  }
  if (series.points.empty()) throw std::runtime_error("series file contains no data rows");
  return series;
}

ConvergenceSeries load_convergence_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series file: " + path);
  return parse_convergence_series(in);
}

} // namespace jtfu
