#include "jtfu/gaussian_family.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "jtfu/hg_modes.hpp"

namespace jtfu {

namespace {

void check_params(const GaussianStateParams& params, bool allow_gamma_zero) {
  if (params.n < 2) throw std::invalid_argument("need at least two photons");
  if (params.gamma < 0.0 || (!allow_gamma_zero && params.gamma == 0.0))
    throw std::invalid_argument("gamma must be positive");
  if (!(params.delta > 0.0)) throw std::invalid_argument("delta must be positive");
}

// Orthonormal Helmert-style basis whose first column is the symmetric
// direction (1,...,1)/sqrt(n); the exponent is diagonal in these coordinates
// with stiffness gamma along column 0 and delta along the rest.
Eigen::MatrixXd symmetric_adapted_basis(int n) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n);
  basis.col(0).setConstant(1.0 / std::sqrt(double(n)));
  for (int k = 1; k < n; ++k) {
    const double scale = 1.0 / std::sqrt(double(k) * (k + 1));
    for (int i = 0; i < k; ++i) basis(i, k) = scale;
    basis(k, k) = -k * scale;
  }
  return basis;
}

// Sum over i of the gradient of the exponent: d_i Phi with
// Phi = [gamma^2 S^2 + delta^2 sum_{i<j}(t_i - t_j)^2] / n, S = sum t.
double exponent_gradient(const GaussianStateParams& p, const Eigen::VectorXd& t,
                         int i) {
  const double s = t.sum();
  return (2.0 / p.n) * (p.gamma * p.gamma - p.delta * p.delta) * s +
         2.0 * p.delta * p.delta * t(i);
}

double exponent_value(const GaussianStateParams& p, const Eigen::VectorXd& t) {
  const double s = t.sum();
  double pair_sum = 0.0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j) pair_sum += (t(i) - t(j)) * (t(i) - t(j));
  return (p.gamma * p.gamma * s * s + p.delta * p.delta * pair_sum) / p.n;
}

struct PairMoments {
  double tau2 = 0.0;
  double omega2 = 0.0;
};

PairMoments quadrature_moments(const GaussianStateParams& params, int nodes) {
  const int n = params.n;
  const QuadratureRule rule = gauss_hermite_rule(nodes);
  const Eigen::MatrixXd basis = symmetric_adapted_basis(n);

  // Axis scalings turn the density into the plain exp(-sum x^2) weight, so
  // only the polynomial factors are integrated numerically.
  Eigen::VectorXd axis_scale(n);
  axis_scale(0) = 1.0 / params.gamma;
  for (int k = 1; k < n; ++k) axis_scale(k) = 1.0 / params.delta;

  double norm = 0.0;
  double tau_acc = 0.0;
  double omega_acc = 0.0;

  std::vector<int> odo(n, 0);
  Eigen::VectorXd y(n);
  Eigen::VectorXd t(n);
  while (true) {
    double weight = 1.0;
    for (int k = 0; k < n; ++k) {
      weight *= rule.weights[odo[k]];
      y(k) = rule.nodes[odo[k]] * axis_scale(k);
    }
    t.noalias() = basis * y;

    const double tau_poly = (t(0) - t(1)) * (t(0) - t(1));
    const double g = exponent_gradient(params, t, 0) + exponent_gradient(params, t, 1);
    const double omega_poly = 0.25 * g * g;

    norm += weight;
    tau_acc += weight * tau_poly;
    omega_acc += weight * omega_poly;

    int axis = 0;
    while (axis < n && ++odo[axis] == nodes) odo[axis++] = 0;
    if (axis == n) break;
  }

  return {tau_acc / norm, omega_acc / norm};
}

} // namespace

double closed_form_product(const GaussianStateParams& params) {
  check_params(params, true);
  const double ratio = params.gamma / params.delta;
  return 1.0 - (2.0 / params.n) * (1.0 - ratio * ratio);
}

GaussianOracleResult numeric_product_oracle(const GaussianStateParams& params,
                                            int base_nodes) {
  check_params(params, false);
  if (params.n != 2 && params.n != 3)
    throw std::invalid_argument("quadrature oracle supports n in {2, 3} only");
  if (base_nodes < 8) throw std::invalid_argument("quadrature grid too coarse to start");

  const PairMoments coarse = quadrature_moments(params, base_nodes);
  const PairMoments fine = quadrature_moments(params, 2 * base_nodes);

  const double coarse_product = coarse.tau2 * coarse.omega2;
  const double fine_product = fine.tau2 * fine.omega2;
  const double shift =
      std::abs(fine_product - coarse_product) / std::max(1.0, std::abs(fine_product));
  if (!(shift <= 1e-9))
    throw std::runtime_error("quadrature grid too coarse: product moved under doubling");

  GaussianOracleResult result;
  result.delta_tau2 = fine.tau2;
  result.delta_omega2 = fine.omega2;
  result.product = fine_product;
  result.nodes_used = 2 * base_nodes;
  result.grid_shift = shift;
  return result;
}

double check_minimum_condition(const GaussianStateParams& params,
                               const std::vector<Eigen::VectorXd>& sample_points) {
  check_params(params, true);
  if (sample_points.size() < 2)
    throw std::invalid_argument("degenerate sample set: need at least two points");

  // Left side: d_i phi = -(1/2) d_i Phi * phi. Right side: sum_{k != i}
  // (t_k - t_i) phi = (S - n t_i) phi. One constant c fitted over all
  // (point, coordinate) pairs; the deviation is normalized by the largest
  // left-side magnitude so the result is scale-free.
  std::vector<double> lhs;
  std::vector<double> rhs;
  lhs.reserve(sample_points.size() * params.n);
  rhs.reserve(sample_points.size() * params.n);

  for (const Eigen::VectorXd& t : sample_points) {
    if (t.size() != params.n)
      throw std::invalid_argument("sample point dimension does not match photon number");
    const double phi = std::exp(-0.5 * exponent_value(params, t));
    const double s = t.sum();
    for (int i = 0; i < params.n; ++i) {
      lhs.push_back(-0.5 * exponent_gradient(params, t, i) * phi);
      rhs.push_back((s - params.n * t(i)) * phi);
    }
  }

  double cross = 0.0;
  double rhs_sq = 0.0;
  double lhs_max = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    cross += lhs[i] * rhs[i];
    rhs_sq += rhs[i] * rhs[i];
    lhs_max = std::max(lhs_max, std::abs(lhs[i]));
  }
  if (rhs_sq == 0.0 || lhs_max == 0.0)
    throw std::invalid_argument("degenerate sample set: proportionality sides vanish");

  const double c = cross / rhs_sq;
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    worst = std::max(worst, std::abs(lhs[i] - c * rhs[i]));
  return worst / lhs_max;
}

std::vector<Eigen::VectorXd> minimum_condition_sample_points(int n, int count,
                                                             std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two coordinates");
  if (count < 1) throw std::invalid_argument("need at least one sample point");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXd> points(count, Eigen::VectorXd(n));
  for (Eigen::VectorXd& p : points)
    for (int i = 0; i < n; ++i) p(i) = gauss(rng);
  return points;
}

} // namespace jtfu
