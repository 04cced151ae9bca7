#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jtfu/operators.hpp"

namespace jtfu {

struct EigenResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  double residual_norm = 0.0;
  int iterations = 0;  // matrix-vector products spent (0 for the dense path)
};

// Thrown when the iterative solver exhausts its restart budget.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  double tolerance = 1e-10;
  std::uint64_t seed = 20240901ull;
  int dense_threshold = 2000;  // ground_state switches to Lanczos above this
  int max_subspace = 260;      // Krylov vectors kept per restart cycle
  int max_restarts = 60;
  const Eigen::VectorXd* warm_start = nullptr;  // optional initial vector
};

// Smallest eigenpair of a symmetric observable: dense direct solve up to
// dense_threshold, Lanczos with full reorthogonalization and restarts above.
// Deterministic for a fixed seed.
EigenResult ground_state(const TwoPhotonOperator& op, double tolerance = 1e-10,
                         std::uint64_t seed = SolverOptions{}.seed);

// `count` lowest eigenpairs (ascending) with the same dispatch rule.
std::vector<EigenResult> lowest_eigenpairs(const Eigen::SparseMatrix<double>& matrix,
                                           int count, const SolverOptions& options);

// Forced dense path (Eigen self-adjoint eigendecomposition); reference oracle.
std::vector<EigenResult> dense_lowest(const Eigen::SparseMatrix<double>& matrix,
                                      int count);

// Forced Lanczos path. Converged pairs are locked and deflated so a second
// pair can be extracted even from a near-degenerate ground space.
std::vector<EigenResult> lanczos_lowest(const Eigen::SparseMatrix<double>& matrix,
                                        int count, const SolverOptions& options);

} // namespace jtfu
