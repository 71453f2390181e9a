#pragma once

// Deterministic randomness for replicated runs.
//
// Stream derivation contract (stable; part of the output format): replication
// r of master seed s draws from std::mt19937_64 seeded with
// splitmix64(splitmix64(s) + r). mt19937_64 construction from a single value
// is fully specified by the standard, so identical (seed, r) gives identical
// streams on every platform.

#include <cstdint>
#include <random>

namespace rankedmm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication) {
  return splitmix64(splitmix64(seed) + replication);
}

inline std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t replication) {
  return std::mt19937_64(replication_seed(seed, replication));
}

// Uniform in (0, 1], from the top 53 bits. The closed-right form keeps
// -log(u) finite.
inline double u01_open_closed(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

// Unbiased integer in [0, n), multiply-shift with rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  using u128 = unsigned __int128;
  u128 product = static_cast<u128>(gen()) * n;
  auto low = static_cast<std::uint64_t>(product);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      product = static_cast<u128>(gen()) * n;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace rankedmm
