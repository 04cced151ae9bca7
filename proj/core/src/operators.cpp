#include "jtfu/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace jtfu {

namespace {

void check_compat(const EnrBasis& basis, const OneBodyMatrices& onebody) {
  if (onebody.t.rows() != basis.modes() || onebody.t.cols() != basis.modes())
    throw std::invalid_argument("one-body matrices do not match basis mode count");
}

// Quartic coefficient of a_m^dag a_n^dag a_p a_q. The t leg pairs (m,q), the
// t' leg pairs (n,p); symmetric under (m,q) <-> (n,p) exchange, which the
// assembly below exploits.
double quartic_coefficient(const OneBodyMatrices& ob, OperatorKind kind,
                           int m, int n, int p, int q) {
  switch (kind) {
    case OperatorKind::tau2:
      return (n == p ? ob.t2(m, q) : 0.0) + (m == q ? ob.t2(n, p) : 0.0) -
             2.0 * ob.t(m, q) * ob.t(n, p);
    case OperatorKind::omega2:
      return -((n == p ? ob.d2(m, q) : 0.0) + (m == q ? ob.d2(n, p) : 0.0) +
               2.0 * ob.d(m, q) * ob.d(n, p));
    default:
      throw std::invalid_argument("quartic coefficients exist for tau2 and omega2 only");
  }
}

// Shared banded assembly for tau2 and omega2. Both coefficient tensors vanish
// unless the creation index sits within two rungs of its annihilation partner,
// so each column only reaches states a few ladder steps away. The exchange
// symmetry of the coefficient halves the loop: only representatives with
// (m,q) <= (n,p) in packed order are visited, off-representatives at weight 2.
TwoPhotonOperator assemble_quartic(std::shared_ptr<const EnrBasis> basis,
                                   const OneBodyMatrices& onebody,
                                   OperatorKind kind) {
  if (!basis) throw std::invalid_argument("null basis");
  check_compat(*basis, onebody);

  const EnrBasis& b = *basis;
  const int modes = b.modes();
  const std::size_t dim = b.dimension();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(dim * 32);
  std::vector<std::uint8_t> target(modes);

  for (std::size_t col = 0; col < dim; ++col) {
    const std::span<const std::uint8_t> v = b.state(col);
    for (int q = 0; q < modes; ++q) {
      if (v[q] == 0) continue;
      const double amp_q = std::sqrt(static_cast<double>(v[q]));
      for (int m = std::max(0, q - 2); m <= std::min(modes - 1, q + 2); ++m) {
        const int alpha = m * modes + q;
        for (int p = 0; p < modes; ++p) {
          const int left_p = v[p] - (p == q ? 1 : 0);
          if (left_p <= 0) continue;
          const double amp_p = std::sqrt(static_cast<double>(left_p));
          for (int n = std::max(0, p - 2); n <= std::min(modes - 1, p + 2); ++n) {
            const int beta = n * modes + p;
            if (beta < alpha) continue;
            const double coeff = quartic_coefficient(onebody, kind, m, n, p, q);
            if (coeff == 0.0) continue;
            const double weight = (beta > alpha) ? 2.0 * coeff : coeff;

            const int count_n = v[n] - (n == q ? 1 : 0) - (n == p ? 1 : 0);
            const double amp_n = std::sqrt(static_cast<double>(count_n + 1));
            const int count_m =
                v[m] - (m == q ? 1 : 0) - (m == p ? 1 : 0) + (m == n ? 1 : 0);
            const double amp_m = std::sqrt(static_cast<double>(count_m + 1));

            for (int i = 0; i < modes; ++i) target[i] = v[i];
            target[q] -= 1;
            target[p] -= 1;
            target[n] += 1;
            target[m] += 1;
            const std::size_t row = b.index_of(target);
            triplets.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                  weight * amp_q * amp_p * amp_n * amp_m);
          }
        }
      }
    }
  }

  TwoPhotonOperator op;
  op.basis = std::move(basis);
  op.kind = kind;
  op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

} // namespace

TwoPhotonOperator assemble_tau2(std::shared_ptr<const EnrBasis> basis,
                                const OneBodyMatrices& onebody) {
  return assemble_quartic(std::move(basis), onebody, OperatorKind::tau2);
}

TwoPhotonOperator assemble_omega2(std::shared_ptr<const EnrBasis> basis,
                                  const OneBodyMatrices& onebody) {
  return assemble_quartic(std::move(basis), onebody, OperatorKind::omega2);
}

TwoPhotonOperator assemble_pair_count(std::shared_ptr<const EnrBasis> basis) {
  if (!basis) throw std::invalid_argument("null basis");
  const std::size_t dim = basis->dimension();
  const double pairs =
      static_cast<double>(basis->photons()) * (basis->photons() - 1);

  TwoPhotonOperator op;
  op.kind = OperatorKind::pair_count;
  op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.matrix.setIdentity();
  op.matrix *= pairs;
  op.basis = std::move(basis);
  return op;
}

TwoPhotonOperator assemble_uncertainty_hamiltonian(const TwoPhotonOperator& tau2,
                                                   const TwoPhotonOperator& omega2,
                                                   double xi) {
  if (tau2.basis != omega2.basis)
    throw std::invalid_argument("uncertainty Hamiltonian needs operators on one shared basis");
  if (!(xi >= 0.0 && xi <= 1.0))
    throw std::invalid_argument("xi must lie in [0, 1]");

  TwoPhotonOperator op;
  op.basis = tau2.basis;
  op.kind = OperatorKind::uncertainty;
  op.xi = xi;
  op.matrix = (xi * tau2.matrix + (1.0 - xi) * omega2.matrix).pruned();
  op.matrix.makeCompressed();
  return op;
}

Eigen::SparseMatrix<double> assemble_one_body(const EnrBasis& basis,
                                              const Eigen::MatrixXd& coeff) {
  if (coeff.rows() != basis.modes() || coeff.cols() != basis.modes())
    throw std::invalid_argument("coefficient matrix does not match basis mode count");

  const int modes = basis.modes();
  const std::size_t dim = basis.dimension();
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::uint8_t> target(modes);

  for (std::size_t col = 0; col < dim; ++col) {
    const std::span<const std::uint8_t> v = basis.state(col);
    for (int j = 0; j < modes; ++j) {
      if (v[j] == 0) continue;
      const double amp_j = std::sqrt(static_cast<double>(v[j]));
      for (int i = 0; i < modes; ++i) {
        if (coeff(i, j) == 0.0) continue;
        const int count_i = v[i] - (i == j ? 1 : 0);
        const double amp_i = std::sqrt(static_cast<double>(count_i + 1));
        for (int k = 0; k < modes; ++k) target[k] = v[k];
        target[j] -= 1;
        target[i] += 1;
        const std::size_t row = basis.index_of(target);
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col),
                              coeff(i, j) * amp_j * amp_i);
      }
    }
  }

  Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(dim),
                                  static_cast<Eigen::Index>(dim));
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

Eigen::MatrixXd assemble_quartic_dense_reference(const EnrBasis& basis,
                                                 const OneBodyMatrices& onebody,
                                                 OperatorKind kind) {
  check_compat(basis, onebody);
  const int modes = basis.modes();
  const std::size_t dim = basis.dimension();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));

  for (int m = 0; m < modes; ++m)
    for (int n = 0; n < modes; ++n)
      for (int p = 0; p < modes; ++p)
        for (int q = 0; q < modes; ++q) {
          const double coeff = quartic_coefficient(onebody, kind, m, n, p, q);
          if (coeff == 0.0) continue;
          for (std::size_t col = 0; col < dim; ++col) {
            for (const QuarticTarget& t : basis.apply_quartic_term(m, n, p, q, col))
              out(static_cast<Eigen::Index>(t.index), static_cast<Eigen::Index>(col)) +=
                  coeff * t.amplitude;
          }
        }
  return out;
}

} // namespace jtfu
