#include "jtfu/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jtfu/hg_modes.hpp"

namespace jtfu {

UncertaintyProblem::UncertaintyProblem(int photons, int modes,
                                       const MinimizeOptions& options)
    : options_(options) {
  if (photons < 2) throw std::invalid_argument("need at least two photons");
  if (modes < 2) throw std::invalid_argument("need at least two modes");
  if (!(options.time_scale > 0.0)) throw std::invalid_argument("time scale must be positive");

  basis_ = std::make_shared<const EnrBasis>(photons, modes);
  const OneBodyMatrices onebody =
      build_one_body_matrices({.size = modes, .scale = options.time_scale});
  tau2_ = assemble_tau2(basis_, onebody);
  omega2_ = assemble_omega2(basis_, onebody);
  first_moment_t_ = assemble_one_body(*basis_, onebody.t);
  first_moment_d_ = assemble_one_body(*basis_, onebody.d);
}

GroundStateResult UncertaintyProblem::evaluate(double xi) {
  const TwoPhotonOperator h = assemble_uncertainty_hamiltonian(tau2_, omega2_, xi);
  const Eigen::Index dim = h.matrix.rows();

  SolverOptions solver;
  solver.tolerance = options_.solver_tolerance;
  solver.seed = options_.seed;
  solver.warm_start = warm_.size() == dim ? &warm_ : nullptr;

  // Two pairs so a near-degenerate ground space can be tie-broken.
  const int count = static_cast<int>(std::min<Eigen::Index>(2, dim));
  std::vector<EigenResult> pairs;
  if (dim <= options_.scan_dense_threshold)
    pairs = dense_lowest(h.matrix, count);
  else
    pairs = lanczos_lowest(h.matrix, count, solver);
  for (const EigenResult& p : pairs) matvecs_ += p.iterations;

  const double n_pairs =
      static_cast<double>(basis_->photons()) * (basis_->photons() - 1);
  const auto fill = [&](const Eigen::VectorXd& v, GroundStateResult& r) {
    r.delta_tau2 = v.dot(tau2_.matrix * v) / n_pairs;
    r.delta_omega2 = v.dot(omega2_.matrix * v) / n_pairs;
    r.product = r.delta_tau2 * r.delta_omega2;
    r.mean_t = v.dot(first_moment_t_ * v) / basis_->photons();
    r.mean_omega = v.dot(first_moment_d_ * v) / basis_->photons();
  };

  GroundStateResult result;
  result.n = basis_->photons();
  result.m = basis_->modes();
  result.xi = xi;
  result.ground_energy = pairs[0].eigenvalue;
  fill(pairs[0].eigenvector, result);
  warm_ = pairs[0].eigenvector;

  if (pairs.size() >= 2) {
    const double gap = pairs[1].eigenvalue - pairs[0].eigenvalue;
    if (gap < 1e-10 * std::max(1.0, std::abs(pairs[0].eigenvalue))) {
      GroundStateResult other = result;
      fill(pairs[1].eigenvector, other);
      if (other.product < result.product) {
        other.ground_energy = pairs[0].eigenvalue;
        result = other;
        warm_ = pairs[1].eigenvector;
      }
      tie_break_ = true;
    }
  }
  return result;
}

GroundStateResult product_at_xi(int photons, int modes, double xi,
                                const MinimizeOptions& options) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("xi must lie strictly inside (0, 1)");
  UncertaintyProblem problem(photons, modes, options);
  return problem.evaluate(xi);
}

MinimizeReport minimize_over_xi_detailed(int photons, int modes,
                                         const MinimizeOptions& options) {
  if (options.grid_points < 3) throw std::invalid_argument("grid needs >= 3 points");
  if (!(options.xi_min > 0.0 && options.xi_max < 1.0 && options.xi_min < options.xi_max))
    throw std::invalid_argument("xi window must satisfy 0 < lo < hi < 1");

  UncertaintyProblem problem(photons, modes, options);
  MinimizeReport report;
  std::vector<GroundStateResult> evaluations;

  const auto evaluate = [&](double xi) -> const GroundStateResult& {
    evaluations.push_back(problem.evaluate(xi));
    const GroundStateResult& r = evaluations.back();
    report.samples.push_back({r.xi, r.product, r.ground_energy});
    return r;
  };

  // coarse pass
  const double step = (options.xi_max - options.xi_min) / (options.grid_points - 1);
  std::size_t best_index = 0;
  for (int i = 0; i < options.grid_points; ++i) {
    const GroundStateResult& r = evaluate(options.xi_min + i * step);
    if (r.product < evaluations[best_index].product)
      best_index = evaluations.size() - 1;
  }

  // golden-section refinement inside the bracket around the best grid point
  double lo = std::max(options.xi_min, evaluations[best_index].xi - step);
  double hi = std::min(options.xi_max, evaluations[best_index].xi + step);
  constexpr double invphi = 0.6180339887498949;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = evaluate(c).product;
  double fd = evaluate(d).product;
  while (hi - lo > options.xi_tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = evaluate(c).product;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = evaluate(d).product;
    }
  }

  const auto by_product = [](const GroundStateResult& a, const GroundStateResult& b) {
    return a.product < b.product;
  };
  const auto by_energy = [](const GroundStateResult& a, const GroundStateResult& b) {
    return a.ground_energy < b.ground_energy;
  };
  report.best = *std::min_element(evaluations.begin(), evaluations.end(), by_product);
  report.best_energy = *std::min_element(evaluations.begin(), evaluations.end(), by_energy);
  report.solver_matvecs = problem.solver_matvecs();
  report.tie_break_used = problem.tie_break_used();
  return report;
}

GroundStateResult minimize_over_xi(int photons, int modes,
                                   const MinimizeOptions& options) {
  return minimize_over_xi_detailed(photons, modes, options).best;
}

} // namespace jtfu
