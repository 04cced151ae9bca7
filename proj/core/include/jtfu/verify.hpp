#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jtfu {

// One named self-check: measured is the worst observed deviation (or an
// indicator value), threshold the bound it was held to. Exceptions inside a
// check mark it failed with the message in note.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct VerificationOptions {
  std::uint64_t seed = 20240901ull;
  int chain_trials = 1000;
  bool quick = false;            // trims the slow batches (unit-test profile)
  double t2_perturbation = 0.0;  // fault-injection hook: offsets the analytic
                                 // second-moment matrix in the oracle check
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  int failed_count() const;
};

// Runs the whole invariant suite: mode-basis oracles, sector enumeration,
// operator assembly, eigensolver, minimizer, extrapolation, Gaussian family,
// mixture-bound chain, and field-level Wick cross-checks. Deterministic for
// a fixed seed.
VerificationReport run_verification(const VerificationOptions& options = {});

} // namespace jtfu
