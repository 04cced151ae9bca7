#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <memory>

#include "jtfu/fock_enr.hpp"
#include "jtfu/hg_modes.hpp"

namespace jtfu {

enum class OperatorKind { tau2, omega2, pair_count, uncertainty };

// Sparse symmetric observable on a fixed photon-number sector. Assembled once
// and immutable afterwards; safe to share across threads.
struct TwoPhotonOperator {
  std::shared_ptr<const EnrBasis> basis;
  Eigen::SparseMatrix<double> matrix;
  OperatorKind kind = OperatorKind::tau2;
  double xi = 0.0;  // meaningful for kind == uncertainty only
};

// Pair time-delay observable: sum over quartic terms a_m^dag a_n^dag a_p a_q
// weighted by T2[m,q] d_np + T2[n,p] d_mq - 2 T[m,q] T[n,p], the mode-basis
// expansion of (t - t')^2 between two detection events.
TwoPhotonOperator assemble_tau2(std::shared_ptr<const EnrBasis> basis,
                                const OneBodyMatrices& onebody);

// Pair sum-frequency observable: quartic weights
// -(D2[m,q] d_np + D2[n,p] d_mq + 2 D[m,q] D[n,p]), the expansion of
// -(d_t + d_t')^2.
TwoPhotonOperator assemble_omega2(std::shared_ptr<const EnrBasis> basis,
                                  const OneBodyMatrices& onebody);

// n(n-1) times the identity on the sector (diagonal by construction).
TwoPhotonOperator assemble_pair_count(std::shared_ptr<const EnrBasis> basis);

// Convex combination xi * tau2 + (1 - xi) * omega2 on a shared basis.
TwoPhotonOperator assemble_uncertainty_hamiltonian(const TwoPhotonOperator& tau2,
                                                   const TwoPhotonOperator& omega2,
                                                   double xi);

// Second-quantized one-body operator Sum_jk coeff[j,k] a_j^dag a_k on the
// sector (used for the <t> and <omega> centering diagnostics).
Eigen::SparseMatrix<double> assemble_one_body(const EnrBasis& basis,
                                              const Eigen::MatrixXd& coeff);

// Brute-force reference: straight quadruple loop over all mode indices,
// applying each quartic term state by state through EnrBasis. Dense output,
// intended for small bases only; validates the banded sparse assembly.
Eigen::MatrixXd assemble_quartic_dense_reference(const EnrBasis& basis,
                                                 const OneBodyMatrices& onebody,
                                                 OperatorKind kind);

} // namespace jtfu
