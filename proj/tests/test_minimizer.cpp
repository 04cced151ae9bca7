// Minimum of the uncertainty product over the Hamiltonian mixing weight xi.
// Physics anchors: the product never drops below 1 - 2/n, truncations nest
// monotonically in the mode count, and the answer is invariant under time
// rescaling of the mode basis (t widths scale up exactly as frequency widths
// scale down).

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "jtfu/minimizer.hpp"

TEST_SUITE_BEGIN("minimizer");

TEST_CASE("two-photon cell has balanced widths at the optimum") {
  // for n = 2 the tau and omega observables are related by a Fourier swap,
  // so the minimizing xi sits at 1/2 with equal pair variances
  const jtfu::MinimizeReport report = jtfu::minimize_over_xi_detailed(2, 6);
  CHECK(report.best.xi == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(report.best.delta_tau2 ==
        doctest::Approx(report.best.delta_omega2).epsilon(1e-5));
  CHECK(report.best.product ==
        doctest::Approx(report.best.delta_tau2 * report.best.delta_omega2)
            .epsilon(1e-12));
  CHECK_FALSE(report.samples.empty());
  CHECK(report.best.product <= report.best_energy.product + 1e-12);
}

TEST_CASE("product respects the sector lower bound") {
  for (auto [n, m] : {std::pair{2, 5}, {3, 5}, {4, 4}}) {
    const jtfu::GroundStateResult best = jtfu::minimize_over_xi(n, m);
    CHECK(best.product >= 1.0 - 2.0 / n - 1e-6);
    CHECK(best.product < 1.0);
    CHECK(best.xi > 0.0);
    CHECK(best.xi < 1.0);
  }
}

TEST_CASE("nested truncations are monotone in the mode count") {
  double previous = 2.0;
  for (int m = 2; m <= 6; ++m) {
    const double product = jtfu::minimize_over_xi(2, m).product;
    CHECK(product <= previous + 1e-9);
    previous = product;
  }
}

TEST_CASE("time-scale invariance of the minimum") {
  jtfu::MinimizeOptions reference;
  const double base = jtfu::minimize_over_xi(2, 5, reference).product;
  for (double scale : {0.5, 2.0}) {
    jtfu::MinimizeOptions options;
    options.time_scale = scale;
    CHECK(jtfu::minimize_over_xi(2, 5, options).product ==
          doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("single evaluation matches the reusable problem") {
  jtfu::UncertaintyProblem problem(3, 4);
  const jtfu::GroundStateResult via_problem = problem.evaluate(0.4);
  const jtfu::GroundStateResult direct = jtfu::product_at_xi(3, 4, 0.4);
  CHECK(via_problem.product == doctest::Approx(direct.product).epsilon(1e-10));
  CHECK(via_problem.ground_energy ==
        doctest::Approx(direct.ground_energy).epsilon(1e-10));

  // repeated evaluation warm-starts from the previous ground vector and must
  // land on the same answer
  const jtfu::GroundStateResult again = problem.evaluate(0.4);
  CHECK(again.product == doctest::Approx(via_problem.product).epsilon(1e-10));
}

TEST_CASE("first moments vanish for ground states") {
  // both observables are even in time and frequency, so the minimizing state
  // carries no net displacement in either variable
  const jtfu::GroundStateResult best = jtfu::minimize_over_xi(2, 6);
  CHECK(std::abs(best.mean_t) <= 1e-8);
  CHECK(std::abs(best.mean_omega) <= 1e-8);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)jtfu::minimize_over_xi(1, 4), std::invalid_argument);
  CHECK_THROWS_AS((void)jtfu::minimize_over_xi(2, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)jtfu::product_at_xi(2, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)jtfu::product_at_xi(2, 4, 1.0), std::invalid_argument);
  jtfu::MinimizeOptions bad;
  bad.time_scale = 0.0;
  CHECK_THROWS_AS((void)jtfu::minimize_over_xi(2, 4, bad), std::invalid_argument);
}

TEST_SUITE_END();
