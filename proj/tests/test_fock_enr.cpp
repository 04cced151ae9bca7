// Fixed-photon-number Fock sector: enumeration, indexing, and the elementary
// quartic ladder action. Dimensions follow the multiset coefficient
// C(photons + modes - 1, modes - 1).

#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "jtfu/fock_enr.hpp"

using jtfu::EnrBasis;

TEST_SUITE_BEGIN("fock_enr");

TEST_CASE("sector dimensions") {
  CHECK(jtfu::enr_dimension(3, 5) == 35);   // C(7,4)
  CHECK(jtfu::enr_dimension(2, 7) == 28);   // C(8,6)
  CHECK(jtfu::enr_dimension(5, 15) == 11628);  // C(19,14), the largest sweep cell
  CHECK(jtfu::enr_dimension(0, 4) == 1);
  CHECK(jtfu::enr_dimension(6, 1) == 1);
  // Pascal recurrence dim(n, m) = dim(n, m-1) + dim(n-1, m)
  for (int n = 1; n <= 5; ++n)
    for (int m = 2; m <= 8; ++m)
      CHECK(jtfu::enr_dimension(n, m) ==
            jtfu::enr_dimension(n, m - 1) + jtfu::enr_dimension(n - 1, m));
}

TEST_CASE("descending lexicographic enumeration") {
  const EnrBasis basis(3, 4);
  REQUIRE(basis.dimension() == jtfu::enr_dimension(3, 4));

  // state 0 piles every photon into mode 0, the last state into the end mode
  const auto first = basis.state(0);
  CHECK(first[0] == 3);
  CHECK(std::accumulate(first.begin(), first.end(), 0) == 3);
  const auto last = basis.state(basis.dimension() - 1);
  CHECK(last[basis.modes() - 1] == 3);
  CHECK(std::accumulate(last.begin(), last.end(), 0) == 3);

  // each state sums to the photon number and strictly precedes its successor
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto s = basis.state(i);
    CHECK(std::accumulate(s.begin(), s.end(), 0) == 3);
    if (i > 0) {
      const auto prev = basis.state(i - 1);
      CHECK(std::lexicographical_compare(s.begin(), s.end(), prev.begin(),
                                         prev.end()));
    }
  }
}

TEST_CASE("index round trip") {
  for (auto [n, m] : {std::pair{3, 5}, {2, 7}, {4, 3}}) {
    const EnrBasis basis(n, m);
    for (std::size_t i = 0; i < basis.dimension(); ++i)
      CHECK(basis.index_of(basis.state(i)) == i);
  }
}

TEST_CASE("index rejects foreign occupation vectors") {
  const EnrBasis basis(3, 4);
  const std::vector<std::uint8_t> wrong_length{3, 0, 0};
  CHECK_THROWS_AS((void)basis.index_of(wrong_length), std::invalid_argument);
  const std::vector<std::uint8_t> wrong_sector{2, 0, 0, 0};
  CHECK_THROWS_AS((void)basis.index_of(wrong_sector), std::invalid_argument);
  CHECK_THROWS_AS((void)basis.state(basis.dimension()), std::out_of_range);
}

TEST_CASE("quartic ladder action with exact amplitudes") {
  const EnrBasis basis(2, 3);

  SUBCASE("a0^dag a0^dag a1 a1 moves a pair between modes") {
    const std::vector<std::uint8_t> from{0, 2, 0};
    const auto targets = basis.apply_quartic_term(0, 0, 1, 1, basis.index_of(from));
    REQUIRE(targets.size() == 1);
    const std::vector<std::uint8_t> to{2, 0, 0};
    CHECK(targets[0].index == basis.index_of(to));
    // annihilate twice from occupation 2: sqrt(2) * sqrt(1); create twice
    // into an empty mode: sqrt(1) * sqrt(2); total amplitude 2
    CHECK(targets[0].amplitude == doctest::Approx(2.0).epsilon(1e-15));
  }

  SUBCASE("number-conserving term reads occupations") {
    const std::vector<std::uint8_t> from{1, 1, 0};
    // a0^dag a1^dag a1 a0 |1,1,0> = 1 * |1,1,0>
    const auto targets = basis.apply_quartic_term(0, 1, 1, 0, basis.index_of(from));
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].index == basis.index_of(from));
    CHECK(targets[0].amplitude == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("annihilating an empty mode yields nothing") {
    const std::vector<std::uint8_t> from{2, 0, 0};
    CHECK(basis.apply_quartic_term(0, 0, 2, 2, basis.index_of(from)).empty());
  }

  SUBCASE("mode indices are validated") {
    CHECK_THROWS_AS((void)basis.apply_quartic_term(0, 0, 0, 3, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("constructor guards") {
  CHECK_THROWS_AS(EnrBasis(-1, 3), std::invalid_argument);
  CHECK_THROWS_AS(EnrBasis(2, 0), std::invalid_argument);
}

TEST_SUITE_END();
