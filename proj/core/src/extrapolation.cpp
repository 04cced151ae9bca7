#include "jtfu/extrapolation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jtfu {

ExtrapolationFit fit_series(const ConvergenceSeries& series, int order) {
  if (order < 1) throw std::invalid_argument("fit order must be >= 1");
  const int count = static_cast<int>(series.points.size());
  if (count < order + 2)
    throw std::invalid_argument("underdetermined fit: need at least order + 2 points");
  for (int i = 0; i + 1 < count; ++i)
    if (series.points[i + 1].m <= series.points[i].m)
      throw std::invalid_argument("mode counts must be strictly increasing");
  for (const ConvergencePoint& p : series.points)
    if (p.m < 1) throw std::invalid_argument("mode counts must be positive");

  // Vandermonde in 1/m with columns scaled to unit norm; the raw design is
  // wildly ill-conditioned at order 6 and the scaling keeps the SVD honest.
  Eigen::MatrixXd design(count, order + 1);
  Eigen::VectorXd rhs(count);
  for (int i = 0; i < count; ++i) {
    const double x = 1.0 / series.points[i].m;
    double power = 1.0;
    for (int j = 0; j <= order; ++j) {
      design(i, j) = power;
      power *= x;
    }
    rhs(i) = series.points[i].value;
  }

  Eigen::VectorXd column_scale(order + 1);
  for (int j = 0; j <= order; ++j) {
    const double norm = design.col(j).norm();
    column_scale(j) = norm > 0.0 ? norm : 1.0;
    design.col(j) /= column_scale(j);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd scaled_coeffs = svd.solve(rhs);
  const Eigen::VectorXd coeffs = scaled_coeffs.cwiseQuotient(column_scale);

  ExtrapolationFit fit;
  fit.order = order;
  fit.intercept = coeffs(0);
  fit.coefficients.assign(coeffs.data() + 1, coeffs.data() + order + 1);
  const Eigen::VectorXd residual = design * scaled_coeffs - rhs;
  fit.rms_residual = std::sqrt(residual.squaredNorm() / count);
  const double sv_min = svd.singularValues()(svd.singularValues().size() - 1);
  fit.condition_number =
      sv_min > 0.0 ? svd.singularValues()(0) / sv_min
                   : std::numeric_limits<double>::infinity();
  return fit;
}

double fit_value(const ExtrapolationFit& fit, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("mode count must be positive");
  double value = fit.intercept;
  double power = 1.0;
  for (double a : fit.coefficients) {
    power /= m;
    value += a * power;
  }
  return value;
}

} // namespace jtfu
