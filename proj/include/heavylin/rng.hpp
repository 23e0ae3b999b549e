#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace heavylin {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for stream `lane` derived from `base`. Distinct lanes give
/// statistically independent engines, so replicates can run on any worker.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t lane) noexcept {
  return splitmix64(base ^ splitmix64(lane + 0x632BE59BD9B4E019ull));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

/// Uniform on the open interval (0, 1) from the top 53 bits.
inline double uniform_open(Engine& eng) noexcept {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_exponential(Engine& eng) noexcept { return -std::log(uniform_open(eng)); }

}  // namespace heavylin
