#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace jtfu {

// Exchange-symmetric Gaussian joint amplitude over n arrival times:
// phi(t) = A exp(-[gamma^2 (sum t)^2 + delta^2 sum_{i<j}(t_i - t_j)^2] / (2n)).
// gamma controls the collective coordinate, delta the relative ones. gamma = 0
// is admitted as the unnormalizable limit (used by the minimum-state condition
// and the limiting bound); the closed-form product is continuous there.
struct GaussianStateParams {
  int n = 2;
  double gamma = 1.0;
  double delta = 1.0;
};

// 1 - (2/n)(1 - gamma^2/delta^2); equals the limiting bound 1 - 2/n at
// gamma = 0 and exactly 1 at gamma = delta (separable case).
double closed_form_product(const GaussianStateParams& params);

struct GaussianOracleResult {
  double delta_tau2 = 0.0;
  double delta_omega2 = 0.0;
  double product = 0.0;
  int nodes_used = 0;      // per-axis count of the accepted (finer) grid
  double grid_shift = 0.0;  // relative product change under grid doubling
};

// Independent check of the closed form: tensor-product quadrature of the
// pair moments <(t1-t2)^2> and <((d1+d2) phi / phi)^2 / 4> over the density,
// evaluated in decorrelated coordinates and validated by grid doubling.
// Supports n in {2, 3} (grid is exponential in n).
GaussianOracleResult numeric_product_oracle(const GaussianStateParams& params,
                                            int base_nodes = 64);

// Worst relative deviation of the minimum-state proportionality
// d_i phi propto sum_{k != i} (t_k - t_i) phi across the sample points, with
// one shared constant fitted by least squares. Zero deviation characterizes
// the gamma = 0 family; separable states violate it at order 1.
double check_minimum_condition(const GaussianStateParams& params,
                               const std::vector<Eigen::VectorXd>& sample_points);

// Seeded standard-normal sample points in n coordinates for the check above.
std::vector<Eigen::VectorXd> minimum_condition_sample_points(int n, int count,
                                                             std::uint64_t seed);

} // namespace jtfu
