#include "jtfu/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace jtfu {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

Vec random_unit(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
  const double norm = v.norm();
  if (norm == 0.0) return Vec::Unit(dim, 0);
  return v / norm;
}

// Two-pass modified Gram-Schmidt; the second pass mops up the rounding the
// first one leaves behind, which is what keeps ghost eigenvalues away.
void orthogonalize(Vec& w, const std::vector<Vec>& against) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& u : against) w -= u.dot(w) * u;
}

double infinity_norm(const SpMat& matrix) {
  double best = 0.0;
  for (int k = 0; k < matrix.outerSize(); ++k) {
    double sum = 0.0;
    for (SpMat::InnerIterator it(matrix, k); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

void check_square(const SpMat& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("eigensolver needs a square matrix");
  if (matrix.rows() == 0) throw std::invalid_argument("eigensolver needs a nonempty matrix");
}

} // namespace

std::vector<EigenResult> dense_lowest(const SpMat& matrix, int count) {
  check_square(matrix);
  if (count < 1 || count > matrix.rows())
    throw std::invalid_argument("eigenpair count out of range");

  const Eigen::MatrixXd dense(matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw SolverError("dense eigendecomposition failed");

  std::vector<EigenResult> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    EigenResult r;
    r.eigenvalue = solver.eigenvalues()(i);
    r.eigenvector = solver.eigenvectors().col(i);
    r.residual_norm = (matrix * r.eigenvector - r.eigenvalue * r.eigenvector).norm();
    r.iterations = 0;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EigenResult> lanczos_lowest(const SpMat& matrix, int count,
                                        const SolverOptions& opt) {
  check_square(matrix);
  const Eigen::Index dim = matrix.rows();
  if (count < 1) throw std::invalid_argument("eigenpair count out of range");
  // Krylov iteration needs room to breathe; solve tiny problems directly.
  if (2 * count + 2 >= dim) return dense_lowest(matrix, std::min<Eigen::Index>(count, dim));

  std::mt19937_64 rng(opt.seed);
  const double scale = std::max(1.0, infinity_norm(matrix));
  const int max_k = static_cast<int>(std::min<Eigen::Index>(opt.max_subspace, dim));

  std::vector<Vec> locked;
  std::vector<EigenResult> results;
  int total_matvecs = 0;

  Vec start;
  if (opt.warm_start && opt.warm_start->size() == dim && opt.warm_start->norm() > 0.0)
    start = *opt.warm_start / opt.warm_start->norm();
  else
    start = random_unit(dim, rng);

  // Each restart cycle grows one Krylov space deflated against everything
  // already locked, so cycle r converges the r-th lowest remaining pair.
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    if (static_cast<int>(locked.size()) == count) break;

    Vec v0 = start;
    orthogonalize(v0, locked);
    double n0 = v0.norm();
    if (n0 < 1e-8) {
      v0 = random_unit(dim, rng);
      orthogonalize(v0, locked);
      n0 = v0.norm();
    }
    v0 /= n0;

    std::vector<Vec> V{v0};
    std::vector<double> alpha;
    std::vector<double> beta;
    double check_gate = 0.5;  // tightens if a residual-bound estimate lies
    bool locked_this_cycle = false;

    while (static_cast<int>(V.size()) <= max_k) {
      Vec w = matrix * V.back();
      ++total_matvecs;
      const double a = V.back().dot(w);
      alpha.push_back(a);
      w -= a * V.back();
      if (V.size() > 1) w -= beta.back() * V[V.size() - 2];
      orthogonalize(w, V);
      orthogonalize(w, locked);
      const double b = w.norm();

      const int k = static_cast<int>(alpha.size());
      Eigen::VectorXd ad = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
      Eigen::VectorXd bd(std::max(0, k - 1));
      for (int i = 0; i + 1 < k; ++i) bd(i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(ad, bd, Eigen::ComputeEigenvectors);

      const double theta = tri.eigenvalues()(0);
      const double bound = b * std::abs(tri.eigenvectors()(k - 1, 0));
      const double target = opt.tolerance * std::max(1.0, std::abs(theta));
      const bool breakdown = b <= 1e-13 * scale;

      if (bound <= target * check_gate || breakdown) {
        Vec x = Vec::Zero(dim);
        for (int i = 0; i < k; ++i) x += tri.eigenvectors()(i, 0) * V[i];
        orthogonalize(x, locked);
        const double xn = x.norm();
        if (xn > 1e-8) {
          x /= xn;
          const Vec hx = matrix * x;
          ++total_matvecs;
          const double rayleigh = x.dot(hx);
          const double residual = (hx - rayleigh * x).norm();
          if (residual <= opt.tolerance * std::max(1.0, std::abs(rayleigh))) {
            EigenResult res;
            res.eigenvalue = rayleigh;
            res.eigenvector = x;
            res.residual_norm = residual;
            locked.push_back(res.eigenvector);
            results.push_back(std::move(res));
            locked_this_cycle = true;
            // hand the next cycle the best guess for the following pair
            if (k >= 2) {
              Vec next = Vec::Zero(dim);
              for (int i = 0; i < k; ++i) next += tri.eigenvectors()(i, 1) * V[i];
              start = next;
            } else {
              start = random_unit(dim, rng);
            }
            break;
          }
          check_gate *= 0.25;  // bound was optimistic, demand more before re-forming
        }
        if (breakdown) {
          start = random_unit(dim, rng);
          break;
        }
      } else if (breakdown) {
        start = random_unit(dim, rng);
        break;
      }

      if (static_cast<int>(V.size()) == max_k) {
        // subspace exhausted: restart from the current best Ritz vector
        Vec next = Vec::Zero(dim);
        for (int i = 0; i < k; ++i) next += tri.eigenvectors()(i, 0) * V[i];
        start = next;
        break;
      }
      beta.push_back(b);
      V.push_back(w / b);
    }

    (void)locked_this_cycle;
  }

  if (static_cast<int>(results.size()) < count) {
    std::ostringstream msg;
    msg << "Lanczos failed to converge " << count << " pair(s) in "
        << opt.max_restarts << " restarts (dim " << dim << ", locked "
        << results.size() << ", " << total_matvecs << " matvecs)";
    throw SolverError(msg.str());
  }

  std::sort(results.begin(), results.end(),
            [](const EigenResult& a, const EigenResult& b) {
              return a.eigenvalue < b.eigenvalue;
            });
  for (EigenResult& r : results) r.iterations = total_matvecs;
  return results;
}

std::vector<EigenResult> lowest_eigenpairs(const SpMat& matrix, int count,
                                           const SolverOptions& options) {
  check_square(matrix);
  if (matrix.rows() <= options.dense_threshold) return dense_lowest(matrix, count);
  return lanczos_lowest(matrix, count, options);
}

EigenResult ground_state(const TwoPhotonOperator& op, double tolerance,
                         std::uint64_t seed) {
  SolverOptions options;
  options.tolerance = tolerance;
  options.seed = seed;
  return lowest_eigenpairs(op.matrix, 1, options).front();
}

} // namespace jtfu
