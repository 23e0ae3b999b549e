#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heavylin/tail_innovations.hpp"

namespace heavylin {

/// Sign assignment for the parametric coefficient families.
struct SignSpec {
  enum class Pattern { positive, alternating, mask };
  Pattern pattern = Pattern::positive;
  /// For Pattern::mask: signs applied cyclically, entry (j mod size) for index j.
  std::vector<int> mask;

  int sign_at(std::int64_t j) const;
  std::string to_string() const;
  /// Accepts "positive", "alternating" or a mask string such as "+-+".
  static SignSpec parse(const std::string& text);
};

/// Eventual shape |c_j| ~ scale * |j|^{-power} * log(|j|)^{-log_power} of a
/// parametric family past its window; `geometric_ratio` > 0 replaces the
/// power law by scale * ratio^{|j|}.
struct TailShape {
  double scale = 1.0;
  double power = 0.0;
  double log_power = 0.0;
  double geometric_ratio = 0.0;

  double operator()(double x) const;
  /// log of the shape at x = e^{log_x}.
  double log_at(double log_x) const;
  /// beta * log_at(s) + s, with the power terms combined before evaluation.
  double log_power_density(double s, double beta) const;
};

/// Value of a (possibly infinite) nonnegative series over the active window
/// plus a bound on the omitted remainder.
struct SeriesSum {
  double partial = 0.0;
  double tail_bound = 0.0;
  /// Set when the parametric tail shape certifies divergence.
  bool divergent = false;

  bool finite() const { return !divergent && std::isfinite(tail_bound); }
  double upper() const { return partial + tail_bound; }
};

struct Aggregates {
  double A = 0.0;
  double A_plus = 0.0;
  double A_minus = 0.0;
  double A_abs = 0.0;
  /// Bound on sum_{|j| > window} |c_j|.
  double tail_bound = 0.0;
};

/// Coefficient sequence {c_j} materialised over its active index range
/// [lo, hi], with a compensated prefix-sum table for O(1) window sums.
/// Parametric families keep their tail shape past the window.
class CoefficientSeq {
 public:
  enum class Kind { finite_support, power_log, geometric, power, derived };

  CoefficientSeq();

  static CoefficientSeq finite_support(std::int64_t offset, std::vector<double> values);
  /// |c_j| = |j|^{-1/alpha} log(|j|)^{-(1+eps)/alpha} for 3 <= |j| <= window.
  static CoefficientSeq power_log(double alpha, double eps, std::int64_t window, SignSpec signs = {});
  /// |c_j| = ratio^{|j|} for |j| <= window.
  static CoefficientSeq geometric(double ratio, std::int64_t window, SignSpec signs = {});
  /// |c_j| = |j|^{-exponent} for 1 <= |j| <= window, c_0 = 0.
  static CoefficientSeq power(double exponent, std::int64_t window, SignSpec signs = {});

  Kind kind() const noexcept { return kind_; }
  std::string kind_name() const;
  bool empty() const noexcept { return values_.empty(); }
  /// Active range; meaningless when empty().
  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return lo_ + static_cast<std::int64_t>(values_.size()) - 1; }
  std::span<const double> values() const noexcept { return values_; }
  /// Window W of a parametric family (indices |j| <= W are materialised), 0 otherwise.
  std::int64_t window() const noexcept { return window_; }
  bool has_tail() const noexcept { return !tail_.empty(); }
  /// Terms whose sum majorises |c_j| for |j| > window().
  const std::vector<TailShape>& tail() const noexcept { return tail_; }
  double tail_majorant(double x) const;
  /// True when |c_j| equals the single tail term exactly past the window,
  /// which is what allows divergence to be certified.
  bool tail_is_exact() const noexcept { return tail_exact_ && tail_.size() == 1; }

  double coeff(std::int64_t j) const;
  /// D(m) = sum_{k <= m} c_k.
  double prefix(std::int64_t m) const;
  /// d_{n,j} = sum_{k=1-j}^{n-j} c_k. n >= 1.
  double d(std::int64_t n, std::int64_t j) const;

  Aggregates aggregates() const;
  /// sum_j |c_j|^beta h(1/|c_j|), h defaults to 1.
  SeriesSum power_sum(double beta, const SlowlyVarying* h = nullptr) const;

  CoefficientSeq positive_part() const;
  CoefficientSeq negative_part() const;
  CoefficientSeq absolute() const;
  CoefficientSeq scaled(double factor) const;
  friend CoefficientSeq operator+(const CoefficientSeq& a, const CoefficientSeq& b);

  /// Parameters of the family, for reports.
  std::string describe() const;

 private:
  void build_prefix();
  CoefficientSeq map_values(double (*fn)(double)) const;

  Kind kind_ = Kind::finite_support;
  std::int64_t lo_ = 0;
  std::vector<double> values_;
  std::vector<double> prefix_hi_;
  std::vector<double> prefix_lo_;
  std::int64_t window_ = 0;
  std::vector<TailShape> tail_;
  bool tail_exact_ = false;
  std::string description_;
};

/// Whether sum_{j >= 3} (shape(j))^beta * (log j)^{h_log_index} diverges.
bool power_series_diverges(const TailShape& shape, double beta, double h_log_index);

/// sum_j |c_j|^alpha h(1/|c_j|): finite iff the linear process is well defined.
SeriesSum three_series_sum(const CoefficientSeq& seq, const TailModel& model);

Aggregates aggregates(const CoefficientSeq& seq);

}  // namespace heavylin
