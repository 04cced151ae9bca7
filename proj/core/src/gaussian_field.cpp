#include "jtfu/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "jtfu/fock_enr.hpp"
#include "jtfu/operators.hpp"

namespace jtfu {

namespace {

constexpr double kModeTailFraction = 1e-12;

double trace_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  // tr(a * b) without forming the product
  return a.cwiseProduct(b.transpose()).sum();
}

// Wick contraction of a factored quartic coefficient A[m,q] B[n,p] against
// the moments: tr(A^T N) tr(B^T N) + tr(A^T N B^T N) + tr(A^T M B M).
double wick_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                 const Eigen::MatrixXd& n, const Eigen::MatrixXd& m) {
  const double direct = a.cwiseProduct(n).sum() * b.cwiseProduct(n).sum();
  const Eigen::MatrixXd an = a.transpose() * n;
  const Eigen::MatrixXd bn = b.transpose() * n;
  const Eigen::MatrixXd am = a.transpose() * m;
  const Eigen::MatrixXd bm = b * m;
  return direct + trace_product(an, bn) + trace_product(am, bm);
}

} // namespace

SchmidtEnsemble build_ensemble(double mu, double gain, int mode_cap) {
  if (!(mu >= 0.0 && mu < 1.0))
    throw std::invalid_argument("Schmidt ratio must lie in [0, 1)");
  if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
  if (mode_cap < 1) throw std::invalid_argument("mode cap must be >= 1");

  SchmidtEnsemble ensemble;
  ensemble.schmidt_ratio = mu;
  ensemble.gain = gain;

  const double head = std::sqrt(1.0 - mu * mu);
  double mean_accum = 0.0;
  for (int k = 0;; ++k) {
    const double lambda = head * std::pow(mu, k);
    const double r = gain * lambda;
    const double occupancy = std::sinh(r) * std::sinh(r);
    if (k > 0 && (lambda == 0.0 || occupancy < kModeTailFraction * mean_accum)) {
      if (lambda > 0.0) {
        // retain the boundary mode so the discarded tail is strictly smaller
        ensemble.mode_indices.push_back(k);
        ensemble.squeeze_params.push_back(r);
      }
      break;
    }
    if (k == mode_cap)
      throw std::runtime_error("Schmidt mode cap reached before the tail criterion");
    ensemble.mode_indices.push_back(k);
    ensemble.squeeze_params.push_back(r);
    mean_accum += occupancy;
  }
  return ensemble;
}

FieldCorrelators correlators(const SchmidtEnsemble& ensemble) {
  if (ensemble.mode_indices.size() != ensemble.squeeze_params.size())
    throw std::invalid_argument("ensemble mode and squeezing lists differ in length");
  int size = 0;
  for (int idx : ensemble.mode_indices) {
    if (idx < 0) throw std::invalid_argument("negative mode index");
    size = std::max(size, idx + 1);
  }
  if (size == 0) size = 1;

  FieldCorrelators corr;
  corr.n = Eigen::MatrixXd::Zero(size, size);
  corr.m = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t k = 0; k < ensemble.mode_indices.size(); ++k) {
    const int idx = ensemble.mode_indices[k];
    const double r = ensemble.squeeze_params[k];
    if (r < 0.0) throw std::invalid_argument("negative squeezing parameter");
    corr.n(idx, idx) += std::sinh(r) * std::sinh(r);
    corr.m(idx, idx) += std::sinh(r) * std::cosh(r);
  }
  return corr;
}

FieldObservables observables_from_correlators(const FieldCorrelators& corr,
                                              const OneBodyMatrices& onebody) {
  const Eigen::Index size = corr.n.rows();
  if (corr.n.cols() != size || corr.m.rows() != size || corr.m.cols() != size)
    throw std::invalid_argument("correlator matrices must be square and equal-sized");
  if (onebody.t.rows() != size)
    throw std::invalid_argument("one-body matrices do not match correlator size");

  const Eigen::MatrixXd& n = corr.n;
  const Eigen::MatrixXd& m = corr.m;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(size, size);

  FieldObservables out;
  out.mean_photons = n.trace();
  out.mean_pairs = n.trace() * n.trace() + trace_product(n, n) + trace_product(m.transpose(), m);
  if (!(out.mean_pairs > 0.0))
    throw std::invalid_argument("no photon pairs in the field state");

  // one t leg and one t' leg each: identity on the spectator leg
  const double tau_raw =
      2.0 * wick_pair(onebody.t2, identity, n, m) - 2.0 * wick_pair(onebody.t, onebody.t, n, m);
  const double omega_raw =
      -2.0 * wick_pair(onebody.d2, identity, n, m) - 2.0 * wick_pair(onebody.d, onebody.d, n, m);
  out.delta_tau2 = tau_raw / out.mean_pairs;
  out.delta_omega2 = omega_raw / out.mean_pairs;
  out.product = out.delta_tau2 * out.delta_omega2;

  if (out.mean_photons > 0.0) {
    const double mean_t = onebody.t.cwiseProduct(n).sum() / out.mean_photons;
    const double mean_w = onebody.d.cwiseProduct(n).sum() / out.mean_photons;
    out.single_t_var = onebody.t2.cwiseProduct(n).sum() / out.mean_photons - mean_t * mean_t;
    out.single_omega_var =
        -onebody.d2.cwiseProduct(n).sum() / out.mean_photons - mean_w * mean_w;
  }
  return out;
}

FieldObservables observables(const SchmidtEnsemble& ensemble) {
  const FieldCorrelators corr = correlators(ensemble);
  const OneBodyMatrices onebody =
      build_one_body_matrices({.size = static_cast<int>(corr.n.rows()), .scale = 1.0});
  return observables_from_correlators(corr, onebody);
}

double solve_gain_for_mean(double mu, double target_mean_n, int mode_cap) {
  if (!(target_mean_n > 0.0)) throw std::invalid_argument("target mean must be positive");
  if (!(mu >= 0.0 && mu < 1.0))
    throw std::invalid_argument("Schmidt ratio must lie in [0, 1)");

  const double head = std::sqrt(1.0 - mu * mu);
  const auto mean_at = [&](double g) {
    double total = 0.0;
    for (int k = 0; k < mode_cap; ++k) {
      const double r = g * head * std::pow(mu, k);
      const double occupancy = std::sinh(r) * std::sinh(r);
      total += occupancy;
      if (occupancy < 1e-16 * std::max(total, 1e-300)) break;
    }
    return total;
  };

  double lo = 0.0;
  double hi = std::asinh(std::sqrt(target_mean_n)) / head;
  if (mean_at(hi) < target_mean_n) {
    // guard against truncation nibbling the bracket edge
    int widen = 0;
    while (mean_at(hi) < target_mean_n) {
      hi *= 1.5;
      if (++widen > 60)
        throw std::runtime_error("gain root finder could not bracket the target mean");
    }
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_at(mid) < target_mean_n ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> default_mu_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.05 * i);
  return grid;
}

ScanResult scan_minimum(double target_mean_n, const std::vector<double>& mu_grid,
                        int mode_cap) {
  if (!(target_mean_n > 0.0)) throw std::invalid_argument("target mean must be positive");
  if (mu_grid.empty()) throw std::invalid_argument("mu grid must be nonempty");

  ScanResult result;
  const auto evaluate = [&](double mu) {
    const double gain = solve_gain_for_mean(mu, target_mean_n, mode_cap);
    const SchmidtEnsemble ensemble = build_ensemble(mu, gain, mode_cap);
    const FieldObservables obs = observables(ensemble);
    ScanPoint point;
    point.mu = mu;
    point.gain = gain;
    point.mean_photons = obs.mean_photons;
    point.product = obs.product;
    point.schmidt_modes = static_cast<int>(ensemble.mode_indices.size());
    result.trace.push_back(point);
    return point;
  };

  std::size_t best = 0;
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    const ScanPoint point = evaluate(mu_grid[i]);
    if (point.product < result.trace[best].product) best = result.trace.size() - 1;
  }
  const double best_mu = result.trace[best].mu;

  // bracket around the winning grid value, clipped to [0, 1)
  double lo = 0.0;
  double hi = std::nextafter(1.0, 0.0);
  for (double mu : mu_grid) {
    if (mu < best_mu) lo = std::max(lo, mu);
    if (mu > best_mu) hi = std::min(hi, mu);
  }

  constexpr double invphi = 0.6180339887498949;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = evaluate(c).product;
  double fd = evaluate(d).product;
  while (hi - lo > 1e-4) {
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

  result.best = *std::min_element(
      result.trace.begin(), result.trace.end(),
      [](const ScanPoint& a, const ScanPoint& b) { return a.product < b.product; });
  return result;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& mean_and_product) {
  if (mean_and_product.size() < 4)
    throw std::invalid_argument("scaling fit needs at least four points");
  for (const auto& [mean, product] : mean_and_product) {
    if (!(mean >= 10.0))
      throw std::invalid_argument("scaling fit expects mean photon numbers >= 10");
    if (!(product < 1.0))
      throw std::invalid_argument("no nonclassical deficit to fit: product >= 1");
  }

  const int count = static_cast<int>(mean_and_product.size());
  Eigen::MatrixXd design(count, 2);
  Eigen::VectorXd rhs(count);
  for (int i = 0; i < count; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(mean_and_product[i].first);
    rhs(i) = std::log(1.0 - mean_and_product[i].second);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd coeffs = svd.solve(rhs);

  ScalingFit fit;
  fit.exponent = -coeffs(1);
  fit.prefactor = std::exp(coeffs(0));
  fit.rms = std::sqrt((design * coeffs - rhs).squaredNorm() / count);
  return fit;
}

BiphotonReference biphoton_reference(double mu, int mode_cap) {
  if (!(mu >= 0.0 && mu < 1.0))
    throw std::invalid_argument("Schmidt ratio must lie in [0, 1)");

  // amplitudes c_k ~ lambda_k; tail mass mu^(2K) kept below 1e-18
  int modes = 1;
  if (mu > 0.0)
    modes = std::min<int>(mode_cap,
                          static_cast<int>(std::ceil(std::log(1e-18) / (2.0 * std::log(mu)))));
  modes = std::max(modes, 2);  // pair basis needs at least two modes to be interesting

  Eigen::VectorXd amps(modes);
  for (int k = 0; k < modes; ++k) amps(k) = std::pow(mu, k);
  amps /= amps.norm();

  const auto basis = std::make_shared<const EnrBasis>(2, modes);
  const OneBodyMatrices onebody = build_one_body_matrices({.size = modes, .scale = 1.0});
  const TwoPhotonOperator tau2 = assemble_tau2(basis, onebody);
  const TwoPhotonOperator omega2 = assemble_omega2(basis, onebody);

  Eigen::VectorXd state = Eigen::VectorXd::Zero(basis->dimension());
  std::vector<std::uint8_t> occ(modes, 0);
  for (int k = 0; k < modes; ++k) {
    occ.assign(modes, 0);
    occ[k] = 2;
    state(static_cast<Eigen::Index>(basis->index_of(occ))) = amps(k);
  }

  BiphotonReference ref;
  ref.modes = modes;
  ref.delta_tau2 = state.dot(tau2.matrix * state) / 2.0;
  ref.delta_omega2 = state.dot(omega2.matrix * state) / 2.0;
  ref.product = ref.delta_tau2 * ref.delta_omega2;
  return ref;
}

double single_mode_pair_mean_bruteforce(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing must be nonnegative");
  if (r == 0.0) return 0.0;
  // p_{2j+2}/p_{2j} = tanh^2 r (2j+1)/(2j+2); extend until terms stop moving
  const double t2 = std::tanh(r) * std::tanh(r);
  double p = 1.0 / std::cosh(r);
  double acc = 0.0;
  for (int j = 0; j < 100000; ++j) {
    const double n = 2.0 * j;
    const double term = p * n * (n - 1.0);
    acc += term;
    if (j > 2 && term < 1e-15 * std::max(acc, 1e-300) && p < 1e-15) break;
    p *= t2 * (2.0 * j + 1.0) / (2.0 * j + 2.0);
  }
  return acc;
}

} // namespace jtfu
