#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heavylin/coefficients.hpp"
#include "heavylin/linproc.hpp"

namespace gen {

/// Small hand-rolled generator collection over a fixed-seed engine.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng); }

  /// Mixture of shapes: plain reals, small integers (ties, exact
  /// cancellations), huge magnitudes.
  double value() {
    switch (integer(0, 3)) {
      case 0: return real(-1, 1);
      case 1: return static_cast<double>(integer(-3, 3));
      case 2: return real(-1e6, 1e6);
      default: return real(-10, 10);
    }
  }

  /// Path values: random walk, piecewise constant jumps, or iid noise.
  std::vector<double> path_values(std::int64_t n) {
    std::vector<double> v(static_cast<std::size_t>(n + 1));
    const int shape = static_cast<int>(integer(0, 2));
    double level = 0.0;
    for (auto& x : v) {
      if (shape == 0) {
        level += real(-1, 1);
        x = level;
      } else if (shape == 1) {
        if (coin(0.3)) level = static_cast<double>(integer(-4, 4));
        x = level;
      } else {
        x = real(-3, 3);
      }
    }
    return v;
  }

  heavylin::CadlagPath path(std::int64_t n) { return heavylin::CadlagPath(n, path_values(n)); }

  /// Finite support sequence with offset in [-3, 3] and up to 6 taps.
  heavylin::CoefficientSeq finite_seq() {
    const std::int64_t offset = integer(-3, 3);
    std::vector<double> values(static_cast<std::size_t>(integer(1, 6)));
    for (auto& c : values) c = coin(0.2) ? 0.0 : real(-2, 2);
    return heavylin::CoefficientSeq::finite_support(offset, values);
  }
};

}  // namespace gen
