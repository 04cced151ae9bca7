#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jtfu {

// Number of occupation vectors over `modes` modes summing to `photons`,
// i.e. the multiset coefficient C(photons + modes - 1, modes - 1).
std::size_t enr_dimension(int photons, int modes);

struct QuarticTarget {
  std::size_t index;
  double amplitude;
};

// Fixed-photon-number Fock sector: every occupation vector of `modes` modes
// with exactly `photons` quanta, enumerated in descending lexicographic order
// so state 0 is (n, 0, ..., 0) and the last state is (0, ..., 0, n).
class EnrBasis {
public:
  EnrBasis(int photons, int modes);

  int photons() const { return photons_; }
  int modes() const { return modes_; }
  std::size_t dimension() const { return dimension_; }

  // Occupation vector of basis state `index`.
  std::span<const std::uint8_t> state(std::size_t index) const;

  // Position of `occupation` in the enumeration. Vectors of the wrong length
  // or photon count are rejected rather than mapped.
  std::size_t index_of(std::span<const std::uint8_t> occupation) const;

  // Normal-ordered quartic term a_j^dag a_k^dag a_l a_q applied to a basis
  // state. The result has at most one entry; annihilating an empty mode
  // yields none. Amplitudes are the usual sqrt(occupation) ladder factors.
  std::vector<QuarticTarget> apply_quartic_term(int j, int k, int l, int q,
                                                std::size_t state_index) const;

private:
  struct KeyHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view key) const {
      // FNV-1a over the packed occupation bytes
      std::uint64_t h = 1469598103934665603ull;
      for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
      }
      return static_cast<std::size_t>(h);
    }
    std::size_t operator()(const std::string& key) const {
      return (*this)(std::string_view(key));
    }
  };

  int photons_;
  int modes_;
  std::size_t dimension_;
  std::vector<std::uint8_t> storage_;  // dimension_ * modes_ packed occupations
  std::unordered_map<std::string, std::size_t, KeyHash, std::equal_to<>> index_;
};

} // namespace jtfu
