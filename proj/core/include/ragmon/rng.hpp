#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ragmon {

// Portable draws over mt19937_64. The std distributions are
// implementation-defined, which would make seeded runs differ across
// standard libraries; these helpers keep byte-identical outputs everywhere.

// Uniform integer in [0, n). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform real in [0, 1) with 53 bits of precision.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Fisher-Yates with uniform_index draws.
template <typename T>
void shuffle_inplace(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// FNV-1a 64-bit; seed perturbs the offset basis.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0) {
  std::uint64_t h = 1469598103934665603ull ^ (seed * 0x9E3779B97F4A7C15ull);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ragmon
