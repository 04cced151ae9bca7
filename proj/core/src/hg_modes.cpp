#include "jtfu/hg_modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jtfu {

namespace {

void check_spec(const ModeBasisSpec& spec) {
  if (spec.size < 1) throw std::invalid_argument("mode basis needs size >= 1");
  if (!(spec.scale > 0.0)) throw std::invalid_argument("mode scale must be positive");
}

} // namespace

// ---- ladder closed forms ----

OneBodyMatrices build_one_body_matrices(const ModeBasisSpec& spec) {
  check_spec(spec);
  const int m = spec.size;
  const double s = spec.scale;

  OneBodyMatrices out;
  out.t = Eigen::MatrixXd::Zero(m, m);
  out.t2 = Eigen::MatrixXd::Zero(m, m);
  out.d = Eigen::MatrixXd::Zero(m, m);
  out.d2 = Eigen::MatrixXd::Zero(m, m);

  for (int k = 0; k < m; ++k) {
    // t = s (a + a^dag) / sqrt(2), d/dt = (a - a^dag) / (s sqrt(2))
    const double lower = std::sqrt(k / 2.0);        // couples k -> k-1
    const double raise = std::sqrt((k + 1) / 2.0);  // couples k -> k+1
    if (k > 0) {
      out.t(k - 1, k) = s * lower;
      out.d(k - 1, k) = lower / s;
    }
    if (k + 1 < m) {
      out.t(k + 1, k) = s * raise;
      out.d(k + 1, k) = -raise / s;
    }

    // t^2 and d^2 share the sqrt((k+1)(k+2))/2 off-diagonal two steps away;
    // the diagonals are +-(k + 1/2), energy split evenly between quadratures.
    out.t2(k, k) = s * s * (k + 0.5);
    out.d2(k, k) = -(k + 0.5) / (s * s);
    if (k + 2 < m) {
      const double hop = std::sqrt(double(k + 1) * double(k + 2)) / 2.0;
      out.t2(k, k + 2) = s * s * hop;
      out.t2(k + 2, k) = s * s * hop;
      out.d2(k, k + 2) = hop / (s * s);
      out.d2(k + 2, k) = hop / (s * s);
    }
  }
  return out;
}

// ---- Gauss-Hermite rule (Golub-Welsch) ----

QuadratureRule gauss_hermite_rule(int point_count) {
  if (point_count < 1) throw std::invalid_argument("quadrature needs at least one point");
  const int n = point_count;

  // Jacobi matrix of the (monic-normalized) Hermite recurrence: zero diagonal,
  // off-diagonal beta_k = sqrt(k / 2).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Gauss-Hermite Jacobi diagonalization failed");

  // Weights through the Christoffel sum 1 / sum_k p_k(x)^2 over the first n
  // orthonormal polynomials. The eigenvector route loses the extreme nodes:
  // their first components sit below the eigensolver's absolute accuracy, so
  // squaring them inflates the far-out weights by many orders of magnitude.
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const std::vector<double> p = hermite_bare_values(n - 1, rule.nodes[i]);
    double christoffel = 0.0;
    for (double v : p) christoffel += v * v;
    rule.weights[i] = 1.0 / christoffel;  // 0 if the sum overflows
  }
  return rule;
}

// ---- pointwise Hermite function evaluation ----

std::vector<double> hermite_bare_values(int k_max, double x) {
  if (k_max < 0) throw std::invalid_argument("hermite order must be >= 0");
  std::vector<double> h(k_max + 1);
  h[0] = std::pow(std::numbers::pi, -0.25);
  if (k_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < k_max; ++k)
    h[k + 1] = std::sqrt(2.0 / (k + 1)) * x * h[k] - std::sqrt(double(k) / (k + 1)) * h[k - 1];
  return h;
}

double hermite_function(int k, double x) {
  return hermite_bare_values(k, x)[k] * std::exp(-0.5 * x * x);
}

// ---- quadrature oracle ----

double quadrature_element(const ModeBasisSpec& spec, int j, OneBodyOp op,
                          int k, int point_count) {
  check_spec(spec);
  if (j < 0 || j >= spec.size || k < 0 || k >= spec.size)
    throw std::invalid_argument("mode index out of range");

  const QuadratureRule rule = gauss_hermite_rule(point_count);
  const int k_max = std::max(j, k);
  const double s = spec.scale;

  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const std::vector<double> h = hermite_bare_values(k_max, x);
    const double hj = h[j];
    const double hk = h[k];
    double f = 0.0;
    switch (op) {
      case OneBodyOp::T:
        f = hj * x * hk;
        break;
      case OneBodyOp::T2:
        f = hj * x * x * hk;
        break;
      case OneBodyOp::D:
        // psi_k' = -x psi_k + sqrt(2k) psi_{k-1}, same Gaussian factored out
        f = hj * (-x * hk + (k > 0 ? std::sqrt(2.0 * k) * h[k - 1] : 0.0));
        break;
      case OneBodyOp::D2:
        // oscillator equation: psi_k'' = (x^2 - 2k - 1) psi_k
        f = hj * (x * x - 2.0 * k - 1.0) * hk;
        break;
    }
    acc += rule.weights[i] * f;
  }

  switch (op) {
    case OneBodyOp::T: return s * acc;
    case OneBodyOp::T2: return s * s * acc;
    case OneBodyOp::D: return acc / s;
    case OneBodyOp::D2: return acc / (s * s);
  }
  throw std::logic_error("unreachable one-body op");
}

} // namespace jtfu
