#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace heavylin {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }
  double high() const noexcept { return sum_; }
  double low() const noexcept { return comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc += x;
  return acc.value();
}

/// Cumulative sums out[k] = xs[0] + ... + xs[k-1], out[0] = 0.
inline std::vector<double> compensated_cumsum(std::span<const double> xs) {
  std::vector<double> out(xs.size() + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    out[i + 1] = acc.value();
  }
  return out;
}

/// Empirical quantile with linear interpolation between order statistics.
/// `sorted` must be sorted ascending and nonempty.
inline double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double prob) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, prob);
}

}  // namespace heavylin
