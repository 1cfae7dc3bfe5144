#pragma once

#include <cstdint>
#include <random>

namespace goldman::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform on [0, 1) from the top 53 bits; same values on every standard library.
inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double symmetric_unit(std::mt19937_64& rng) { return 2.0 * unit_interval(rng) - 1.0; }

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace goldman::detail
