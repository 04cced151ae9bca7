#include "jtfu/fock_enr.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace jtfu {

std::size_t enr_dimension(int photons, int modes) {
  if (photons < 0) throw std::invalid_argument("photon number must be >= 0");
  if (modes < 1) throw std::invalid_argument("mode count must be >= 1");
  // C(photons + modes - 1, modes - 1), exact in integer arithmetic: the
  // running product is divisible by i at every step.
  unsigned long long result = 1;
  for (int i = 1; i <= modes - 1; ++i) {
    result = result * static_cast<unsigned long long>(photons + i) / i;
  }
  return static_cast<std::size_t>(result);
}

EnrBasis::EnrBasis(int photons, int modes)
    : photons_(photons), modes_(modes), dimension_(enr_dimension(photons, modes)) {
  if (photons > 255) throw std::invalid_argument("photon number exceeds occupation storage");

  storage_.reserve(dimension_ * static_cast<std::size_t>(modes_));
  index_.reserve(dimension_);

  std::vector<std::uint8_t> occ(modes_, 0);
  occ[0] = static_cast<std::uint8_t>(photons_);
  std::size_t position = 0;
  while (true) {
    storage_.insert(storage_.end(), occ.begin(), occ.end());
    index_.emplace(std::string(occ.begin(), occ.end()), position++);

    // descending-lex successor: pull one photon off the last nonzero entry
    // left of the final mode and dump everything to its right one slot over
    int pivot = -1;
    for (int i = modes_ - 2; i >= 0; --i) {
      if (occ[i] > 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) break;
    int shifted = 1;
    for (int i = pivot + 1; i < modes_; ++i) shifted += occ[i];
    occ[pivot] -= 1;
    for (int i = pivot + 1; i < modes_; ++i) occ[i] = 0;
    occ[pivot + 1] = static_cast<std::uint8_t>(shifted);
  }

  if (position != dimension_)
    throw std::logic_error("occupation enumeration disagrees with counting formula");
}

std::span<const std::uint8_t> EnrBasis::state(std::size_t index) const {
  if (index >= dimension_) throw std::out_of_range("basis state index out of range");
  return {storage_.data() + index * static_cast<std::size_t>(modes_),
          static_cast<std::size_t>(modes_)};
}

std::size_t EnrBasis::index_of(std::span<const std::uint8_t> occupation) const {
  if (occupation.size() != static_cast<std::size_t>(modes_))
    throw std::invalid_argument("occupation vector has wrong mode count");
  const std::string_view key(reinterpret_cast<const char*>(occupation.data()),
                             occupation.size());
  const auto it = index_.find(key);
  if (it == index_.end())
    throw std::invalid_argument("occupation vector is not in this photon sector");
  return it->second;
}

std::vector<QuarticTarget> EnrBasis::apply_quartic_term(int j, int k, int l, int q,
                                                        std::size_t state_index) const {
  if (j < 0 || j >= modes_ || k < 0 || k >= modes_ || l < 0 || l >= modes_ ||
      q < 0 || q >= modes_)
    throw std::invalid_argument("quartic mode index out of range");

  const std::span<const std::uint8_t> src = state(state_index);
  std::vector<std::uint8_t> occ(src.begin(), src.end());

  double amplitude = 1.0;
  // right to left: annihilate q, annihilate l, create k, create j
  if (occ[q] == 0) return {};
  amplitude *= std::sqrt(static_cast<double>(occ[q]));
  occ[q] -= 1;
  if (occ[l] == 0) return {};
  amplitude *= std::sqrt(static_cast<double>(occ[l]));
  occ[l] -= 1;
  amplitude *= std::sqrt(static_cast<double>(occ[k] + 1));
  occ[k] += 1;
  amplitude *= std::sqrt(static_cast<double>(occ[j] + 1));
  occ[j] += 1;

  return {{index_of(occ), amplitude}};
}

} // namespace jtfu
