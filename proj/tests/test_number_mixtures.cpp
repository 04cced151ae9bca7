// Photon-number mixtures and the closed-form lower bound on the uncertainty
// product.
//
// Frozen oracle values (30-digit arbitrary-precision arithmetic on the
// analytic distributions):
//   Poisson mean 4:          bound = 0.74804616880499798
//   thermal mean 2.5:        bound = 0.77911822681589210
//   squeezed vacuum mean 3.5: bound = 0.87491513786689969,
//                            <n(n-1)> = sinh^2 r (1 + 3 sinh^2 r) = 40.25
//   simplified bound at mean 4: sqrt(1/2) = 0.70710678118654752
//   f(3.7) = 2.7 sqrt(1 - 2/3.7) = 1.8301528513923255

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "jtfu/number_mixtures.hpp"

using jtfu::PhotonNumberDistribution;

TEST_SUITE_BEGIN("number_mixtures");

TEST_CASE("generator moments") {
  const auto poisson = PhotonNumberDistribution::poisson(4.0);
  CHECK(poisson.mean() == doctest::Approx(4.0).epsilon(1e-11));
  CHECK(poisson.pair_mean() == doctest::Approx(16.0).epsilon(1e-11));

  const auto thermal = PhotonNumberDistribution::thermal(2.5);
  CHECK(thermal.mean() == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(thermal.pair_mean() == doctest::Approx(12.5).epsilon(1e-10));

  const auto sv = PhotonNumberDistribution::squeezed_vacuum(3.5);
  CHECK(sv.mean() == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(sv.pair_mean() == doctest::Approx(40.25).epsilon(1e-9));
  // only even photon numbers are populated
  for (int n = 1; n <= sv.max_n(); n += 2) CHECK(sv.p(n) == 0.0);
}

TEST_CASE("closed-form bound at frozen points") {
  CHECK(jtfu::general_bound(PhotonNumberDistribution::poisson(4.0)).value ==
        doctest::Approx(0.74804616880499798).epsilon(1e-10));
  CHECK(jtfu::general_bound(PhotonNumberDistribution::thermal(2.5)).value ==
        doctest::Approx(0.77911822681589210).epsilon(1e-10));
  CHECK(jtfu::general_bound(PhotonNumberDistribution::squeezed_vacuum(3.5)).value ==
        doctest::Approx(0.87491513786689969).epsilon(1e-9));
  CHECK(jtfu::simplified_bound(4.0) ==
        doctest::Approx(0.70710678118654752).epsilon(1e-15));
  CHECK(jtfu::pair_bound_f(3.7) ==
        doctest::Approx(1.8301528513923255).epsilon(1e-14));
}

TEST_CASE("pure biphoton drives the bound to zero") {
  const PhotonNumberDistribution biphoton({0.0, 0.0, 1.0});
  const jtfu::GeneralBound bound = jtfu::general_bound(biphoton);
  CHECK(bound.value == 0.0);
}

TEST_CASE("pair-weighted average") {
  // p2 = p3 = 1/2: pair weights 2 and 6, so <E> = (2 E2 + 6 E3) / 8
  const PhotonNumberDistribution dist({0.0, 0.0, 0.5, 0.5});
  const std::vector<double> values{0.0, 0.0, 1.0, 3.0};
  CHECK(jtfu::pair_weighted_average(dist, values) ==
        doctest::Approx((2.0 * 1.0 + 6.0 * 3.0) / 8.0).epsilon(1e-14));
  const std::vector<double> incomplete{0.0, 0.0, 1.0};
  CHECK_THROWS_AS((void)jtfu::pair_weighted_average(dist, incomplete),
                  std::invalid_argument);
}

TEST_CASE("derivation chain holds on saturating widths") {
  const auto dist = PhotonNumberDistribution::poisson(4.0);
  std::vector<double> tau(dist.max_n() + 1, 0.5);
  std::vector<double> omega(dist.max_n() + 1, 0.5);
  for (int n = 3; n <= dist.max_n(); ++n) {
    tau[n] = std::pow(1.0 - 2.0 / n, 0.25);
    omega[n] = tau[n];
  }
  const jtfu::ChainReport chain = jtfu::verify_chain(dist, tau, omega);
  CHECK(chain.all_hold);
  CHECK(chain.full_product >= chain.cauchy_schwarz - 1e-12);
  CHECK(chain.cauchy_schwarz >= chain.per_subspace - 1e-12);
  CHECK(chain.per_subspace >= chain.jensen - 1e-12);
  CHECK(chain.jensen >= chain.closed - 1e-12);
  CHECK(chain.simplified_applicable);
  CHECK(chain.closed >= chain.simplified - 1e-12);
  CHECK(chain.aux_ratio >= dist.mean() - 1e-12);
  CHECK(chain.closed ==
        doctest::Approx(jtfu::general_bound(dist).value).epsilon(1e-12));
}

TEST_CASE("inadmissible subspace widths are rejected") {
  const auto dist = PhotonNumberDistribution::poisson(4.0);
  const std::vector<double> tau(dist.max_n() + 1, 0.5);
  std::vector<double> omega(dist.max_n() + 1, 0.5);
  // tau_4 * omega_4 = 0.25 < sqrt(1 - 2/4): violates the subspace bound
  CHECK_THROWS_AS((void)jtfu::verify_chain(dist, tau, omega),
                  std::invalid_argument);
}

TEST_CASE("convexity of the pair bound on x >= 3") {
  double previous_slope = -1e300;
  for (double x = 3.0; x <= 40.0; x += 0.5) {
    const double slope = (jtfu::pair_bound_f(x + 1e-4) - jtfu::pair_bound_f(x)) / 1e-4;
    CHECK(slope >= previous_slope - 1e-9);
    previous_slope = slope;
  }
}

TEST_CASE("distribution file round trip") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "jtfu_test_dist.csv";
  {
    std::ofstream out(path);
    out << "# comment line\n" << "n,p\n" << "0,0.25\n" << "2,0.5\n" << "4,0.25\n";
  }
  const auto dist = PhotonNumberDistribution::from_file(path.string());
  CHECK(dist.max_n() == 4);
  CHECK(dist.p(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dist.mean() == doctest::Approx(2.0).epsilon(1e-14));
  fs::remove(path);

  CHECK_THROWS_AS((void)PhotonNumberDistribution::from_file("/nonexistent/d.csv"),
                  std::runtime_error);
}

TEST_CASE("input guards") {
  CHECK_THROWS_AS(PhotonNumberDistribution({0.6, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(PhotonNumberDistribution({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS((void)PhotonNumberDistribution::poisson(0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)jtfu::simplified_bound(1.5), std::invalid_argument);
  CHECK_THROWS_AS((void)jtfu::pair_bound_f(1.9), std::invalid_argument);
  // all mass below two photons leaves no pair to bound
  const PhotonNumberDistribution no_pairs({0.5, 0.5});
  CHECK_THROWS_AS((void)jtfu::general_bound(no_pairs), std::invalid_argument);
}

TEST_SUITE_END();
