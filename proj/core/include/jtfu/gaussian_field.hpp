#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jtfu/hg_modes.hpp"

namespace jtfu {

// Multimode squeezed vacuum over Hermite-Gauss Schmidt modes with geometric
// Schmidt coefficients lambda_k = sqrt(1 - mu^2) mu^k and per-mode squeezing
// r_k = gain * lambda_k. Truncated where sinh^2(r_k) stops contributing.
struct SchmidtEnsemble {
  std::vector<int> mode_indices;
  std::vector<double> squeeze_params;
  double schmidt_ratio = 0.0;  // mu
  double gain = 0.0;           // g
};

SchmidtEnsemble build_ensemble(double mu, double gain, int mode_cap = 512);

// Second moments in the HG mode basis: N[j,k] = <a_j^dag a_k>,
// M[j,k] = <a_j a_k>. Real symmetric for real (zero-phase) Schmidt modes.
struct FieldCorrelators {
  Eigen::MatrixXd n;
  Eigen::MatrixXd m;
};

FieldCorrelators correlators(const SchmidtEnsemble& ensemble);

struct FieldObservables {
  double single_t_var = 0.0;      // per-photon time variance
  double single_omega_var = 0.0;  // per-photon frequency variance
  double delta_tau2 = 0.0;        // pair time-delay moment / <n(n-1)>
  double delta_omega2 = 0.0;      // pair sum-frequency moment / <n(n-1)>
  double mean_photons = 0.0;      // <n>
  double mean_pairs = 0.0;        // <n(n-1)>
  double product = 0.0;           // R
};

// Wick contraction of the quartic pair observables against N and M:
// <a_m^dag a_n^dag a_p a_q> = N[m,q]N[n,p] + N[m,p]N[n,q] + M[m,n]M[p,q].
FieldObservables observables_from_correlators(const FieldCorrelators& corr,
                                              const OneBodyMatrices& onebody);

// Convenience: ensemble -> correlators -> observables with a matching basis.
FieldObservables observables(const SchmidtEnsemble& ensemble);

struct ScanPoint {
  double mu = 0.0;
  double gain = 0.0;
  double mean_photons = 0.0;
  double product = 0.0;
  int schmidt_modes = 0;
};

struct ScanResult {
  ScanPoint best;
  std::vector<ScanPoint> trace;  // grid evaluations plus refinement steps
};

// Minimum product at fixed mean photon number: for each mu the gain is solved
// from sum_k sinh^2(g lambda_k) = target (monotone, bisected), then the best
// grid mu is refined by golden section.
ScanResult scan_minimum(double target_mean_n, const std::vector<double>& mu_grid,
                        int mode_cap = 512);
std::vector<double> default_mu_grid();  // {0, 0.05, ..., 0.95}

// Gain that hits a target mean photon number for a given ensemble shape.
double solve_gain_for_mean(double mu, double target_mean_n, int mode_cap = 512);

struct ScalingFit {
  double exponent = 0.0;   // k in log(1 - R) = log c - k log<n>
  double prefactor = 0.0;  // c
  double rms = 0.0;
};

// Least squares of log(1 - R) against log<n> over scan minima.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& mean_and_product);

// Two-photon reference for the small-gain limit: expectations of the pair
// observables on the explicit biphoton vector sum_k lambda_k |2_k> built in a
// photon-pair basis. Independent of the Wick machinery.
struct BiphotonReference {
  double delta_tau2 = 0.0;
  double delta_omega2 = 0.0;
  double product = 0.0;
  int modes = 0;
};

BiphotonReference biphoton_reference(double mu, int mode_cap = 64);

// <n(n-1)> of a single-mode squeezed vacuum by direct Fock-ladder summation,
// extended until the terms stop mattering; validates the trace formula.
double single_mode_pair_mean_bruteforce(double r);

} // namespace jtfu
