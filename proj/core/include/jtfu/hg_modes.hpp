#pragma once

#include <Eigen/Dense>
#include <vector>

namespace jtfu {

// Temporal mode basis: the lowest `size` Hermite-Gauss functions, stretched in
// time by `scale`. Mode k is psi_k(t / scale) / sqrt(scale) with psi_k the
// unit-width harmonic oscillator eigenfunction, so the basis stays orthonormal
// for every scale and frequency widths shrink as 1 / scale.
struct ModeBasisSpec {
  int size = 1;
  double scale = 1.0;
};

// One-body matrix elements between basis modes. t and t2 are the first and
// second moments of time, d and d2 the first and second time derivatives
// (d is the frequency quadrature up to a factor of i, d2 = -omega^2 kernel).
// All four are size x size; t, t2, d2 are symmetric, d is antisymmetric.
struct OneBodyMatrices {
  Eigen::MatrixXd t;
  Eigen::MatrixXd t2;
  Eigen::MatrixXd d;
  Eigen::MatrixXd d2;
};

enum class OneBodyOp { T, T2, D, D2 };

// Closed-form ladder-algebra construction, exact to rounding.
OneBodyMatrices build_one_body_matrices(const ModeBasisSpec& spec);

// Gauss-Hermite rule for integrals of f(x) exp(-x^2) dx: weights already
// contain the Gaussian, nodes ascend. Built by diagonalizing the Jacobi
// matrix of the Hermite recurrence.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_hermite_rule(int point_count);

// Values of the normalized Hermite functions psi_0..psi_{k_max} at x with the
// Gaussian exp(-x^2/2) factored out, i.e. psi_k(x) = result[k] * exp(-x^2/2).
// This is the numerically safe form for quadrature at large |x|.
std::vector<double> hermite_bare_values(int k_max, double x);

// Unit-width Hermite function psi_k(x), Gaussian included.
double hermite_function(int k, double x);

// Independent oracle for a single one-body matrix element: numerical
// quadrature where only the integral is numerical. Derivatives use the
// pointwise identities psi_k' = -x psi_k + sqrt(2k) psi_{k-1} and
// psi_k'' = (x^2 - 2k - 1) psi_k rather than the ladder matrices under test.
double quadrature_element(const ModeBasisSpec& spec, int j, OneBodyOp op,
                          int k, int point_count = 128);

} // namespace jtfu
