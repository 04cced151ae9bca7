// Drives the library's own invariant suite (the same one behind the CLI
// verify command) at the full profile and surfaces each named check as an
// assertion, so a regression identifies itself in the test log.

#include <doctest.h>

#include "jtfu/verify.hpp"

TEST_SUITE_BEGIN("verify");

TEST_CASE("full invariant suite passes") {
  jtfu::VerificationOptions options;  // full profile, default seed and trials
  const jtfu::VerificationReport report = jtfu::run_verification(options);
  CHECK(report.checks.size() >= 30);
  for (const jtfu::CheckResult& check : report.checks) {
    INFO(check.name, ": measured ", check.measured, " threshold ",
         check.threshold, " ", check.note);
    CHECK(check.passed);
  }
  CHECK(report.all_passed());
}

TEST_CASE("fault injection is detected") {
  jtfu::VerificationOptions options;
  options.quick = true;
  options.t2_perturbation = 1e-6;
  const jtfu::VerificationReport report = jtfu::run_verification(options);
  CHECK(report.failed_count() >= 1);
}

TEST_SUITE_END();
