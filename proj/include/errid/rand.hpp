#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace errid {

// Seeded RNG helpers with fully specified output, so that seeded runs are
// reproducible independent of the standard library's distribution internals.

inline double uniform01(std::mt19937_64& rng) {
  // 53 random mantissa bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [-range, range].
inline double uniform_sym(std::mt19937_64& rng, double range) {
  return (2.0 * uniform01(rng) - 1.0) * range;
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Sample k distinct indices from [0, n) in selection order.
std::vector<size_t> sample_without_replacement(size_t n, size_t k, std::mt19937_64& rng);

}  // namespace errid
