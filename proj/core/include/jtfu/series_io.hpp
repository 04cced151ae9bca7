#pragma once

#include <iosfwd>
#include <string>

#include "jtfu/extrapolation.hpp"

namespace jtfu {

// Shortest round-trippable-ish decimal: twelve significant digits.
std::string format_double(double value);

// Reads a two-column CSV of (mode count, value) rows. Lines starting with
// '#' and a single non-numeric header line are skipped. The photon number
// of the returned series is left at zero; callers set it from context.
// Throws std::runtime_error on unreadable files or malformed rows.
ConvergenceSeries load_convergence_series(const std::string& path);
ConvergenceSeries parse_convergence_series(std::istream& in);

} // namespace jtfu
