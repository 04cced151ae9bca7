#pragma once

#include <span>
#include <string>
#include <vector>

namespace jtfu {

// Finite photon-number distribution p_0..p_N. Generators truncate once the
// remaining tail mass drops below 1e-13, so the sum stays within the 1e-12
// normalization tolerance without renormalizing.
class PhotonNumberDistribution {
 public:
  explicit PhotonNumberDistribution(std::vector<double> probabilities);

  static PhotonNumberDistribution poisson(double mean);
  static PhotonNumberDistribution thermal(double mean);
  // Single-mode squeezed vacuum (even photon numbers only) at a given mean.
  static PhotonNumberDistribution squeezed_vacuum(double mean);
  // One probability per line, or "n,p" rows (optionally with a header);
  // '#' starts a comment.
  static PhotonNumberDistribution from_file(const std::string& path);

  const std::vector<double>& probabilities() const { return p_; }
  int max_n() const { return static_cast<int>(p_.size()) - 1; }
  double p(int n) const;
  double mean() const { return mean_; }
  double pair_mean() const { return pair_mean_; }  // <n(n-1)>

 private:
  std::vector<double> p_;
  double mean_ = 0.0;
  double pair_mean_ = 0.0;
};

// Pair-weighted mixture average: sum_n p_n n(n-1) E_n / <n(n-1)>. Values are
// indexed by photon number and must cover every n carrying pair weight.
double pair_weighted_average(const PhotonNumberDistribution& dist,
                             std::span<const double> subspace_values);

struct GeneralBound {
  double value = 0.0;
  bool degenerate = false;  // radicand clipped at zero
};

// Closed-form mixture lower bound on the uncertainty product:
// sqrt(1 - 2(1-p0-p1-p2)/(<n>-p1-2p2)) * (1 - 2 p2/<n(n-1)>), with the first
// factor read as 1 when no mass sits above two photons.
GeneralBound general_bound(const PhotonNumberDistribution& dist);

// sqrt(1 - 2/mean_n), the global simplification valid from mean_n = 2 up.
double simplified_bound(double mean_n);

// f(x) = (x-1) sqrt(1 - 2/x); convex on x >= 3, which is what justifies the
// Jensen step of the bound chain. Exposed for direct convexity testing.
double pair_bound_f(double x);

// Every intermediate stage of the mixture bound derivation, evaluated
// numerically, plus the per-link comparisons. Stages shrink monotonically:
// full >= cauchy_schwarz >= per_subspace >= jensen >= closed >= simplified
// (the last applies when mean >= 2).
struct ChainReport {
  double full_product = 0.0;      // sqrt(avg tau^2 * avg Omega^2)
  double cauchy_schwarz = 0.0;    // pair-weighted avg of tau_n * Omega_n
  double per_subspace = 0.0;      // pair-weighted avg of sqrt(1 - 2/n)
  double jensen = 0.0;            // after Jensen with weights p_n n over n >= 3
  double closed = 0.0;            // the general_bound value
  double simplified = 0.0;        // simplified_bound(mean) * (1 - 2 p2/<n(n-1)>)
  double aux_ratio = 0.0;         // (<n>-p1-2p2)/(1-p0-p1-p2), infinity if no tail
  bool simplified_applicable = false;  // mean >= 2
  bool link_full_cs = false;
  bool link_cs_subspace = false;
  bool link_subspace_jensen = false;
  bool link_jensen_closed = false;
  bool link_closed_simplified = false;  // vacuously true when not applicable
  bool all_hold = false;
};

// subspace_tau / subspace_omega hold the per-subspace widths (not squared),
// indexed by photon number; each pair must respect its subspace bound
// tau_n * omega_n >= sqrt(1 - 2/n), otherwise the inputs are rejected.
ChainReport verify_chain(const PhotonNumberDistribution& dist,
                         std::span<const double> subspace_tau,
                         std::span<const double> subspace_omega);

} // namespace jtfu
