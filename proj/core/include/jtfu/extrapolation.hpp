#pragma once

#include <vector>

namespace jtfu {

struct ConvergencePoint {
  int m = 0;        // mode count
  double value = 0.0;  // product R at that truncation
};

// Convergence series R(m) for one photon number, m strictly increasing.
struct ConvergenceSeries {
  int n = 0;
  std::vector<ConvergencePoint> points;
};

struct ExtrapolationFit {
  double intercept = 0.0;               // infinite-basis estimate
  std::vector<double> coefficients;     // a_1..a_order multiplying m^-1..m^-order
  double rms_residual = 0.0;
  double condition_number = 0.0;        // of the column-scaled design matrix
  int order = 0;
};

// Least-squares fit of the series to intercept + sum_i a_i m^-i. Requires at
// least order + 2 points so the fit is overdetermined by one.
ExtrapolationFit fit_series(const ConvergenceSeries& series, int order = 6);

// Fit value at a given m (for residual inspection and plotting).
double fit_value(const ExtrapolationFit& fit, double m);

} // namespace jtfu
