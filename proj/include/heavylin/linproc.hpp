#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "heavylin/coefficients.hpp"
#include "heavylin/tail_innovations.hpp"

namespace heavylin {

/// Innovations Y_lo, ..., Y_{lo + size - 1}.
struct InnovationWindow {
  std::int64_t lo = 0;
  std::vector<double> values;

  std::int64_t hi() const noexcept { return lo + static_cast<std::int64_t>(values.size()) - 1; }
  bool covers(std::int64_t a, std::int64_t b) const noexcept { return a >= lo && b <= hi(); }
  double at(std::int64_t i) const { return values[static_cast<std::size_t>(i - lo)]; }
  /// Throws RangeError naming the indices of [a, b] outside the window.
  void require(std::int64_t a, std::int64_t b) const;
};

/// Index range of innovations needed for X_1..X_n, equivalently for all
/// nonzero d_{n,j}: [1 - hi, n - lo].
std::pair<std::int64_t, std::int64_t> required_innovations(const CoefficientSeq& seq, std::int64_t n);

InnovationWindow draw_innovations(const InnovationSampler& sampler, std::int64_t lo, std::int64_t hi,
                                  Engine& eng);

/// Step path on the grid k/n, k = 0..n: value(t) = values[floor(n t)].
struct CadlagPath {
  std::int64_t n = 1;
  std::vector<double> values = std::vector<double>(2, 0.0);

  CadlagPath() = default;
  CadlagPath(std::int64_t n, std::vector<double> values);

  double value(double t) const;
  double at(std::int64_t k) const { return values[static_cast<std::size_t>(k)]; }
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

CadlagPath operator+(const CadlagPath& x, const CadlagPath& y);
CadlagPath operator-(const CadlagPath& x, const CadlagPath& y);
CadlagPath operator*(double a, const CadlagPath& x);

struct ProcessValues {
  std::int64_t first = 1;
  std::vector<double> values;
  /// Bound on sum_{|j| > window} |c_j| omitted by the materialised window,
  /// in units of |Y|.
  double truncation_bound = 0.0;
};

/// X_i = sum_j c_j Y_{i-j} for i in [i_lo, i_hi].
ProcessValues build_process(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t i_lo,
                            std::int64_t i_hi);

/// values[k] = (1/a_n) sum_{i <= k} X_i.
CadlagPath partial_sum_path(std::span<const double> x, double a_n);

struct Decomposition {
  double minus = 0.0;
  double zero = 0.0;
  double plus = 0.0;

  double total() const { return minus + zero + plus; }
};

/// S_n(t) split by innovation index: j <= 0, 1 <= j <= [nt], j > [nt].
Decomposition decompose_path(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t n,
                             double t, double a_n);

struct SplitPaths {
  CadlagPath plus;
  CadlagPath minus;
  CadlagPath abs;
};

SplitPaths split_pm_paths(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t n, double a_n);

/// S_n for the filter and Z_n for the innovations Y_1..Y_n.
CadlagPath sum_path(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t n, double a_n);
CadlagPath innovation_path(const InnovationWindow& y, std::int64_t n, double a_n);

}  // namespace heavylin
