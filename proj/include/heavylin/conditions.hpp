#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heavylin/coefficients.hpp"
#include "heavylin/tail_innovations.hpp"

namespace heavylin {

struct ConditionSums {
  double left = 0.0;
  double right = 0.0;
  /// Bound on the contribution of coefficients past the materialised window;
  /// NaN when no bound is available for the model.
  double truncation_bound = 0.0;
};

/// Boundary sums sum (|d_{n,j}|/(r a_n))^alpha h(r a_n/|d_{n,j}|) over
/// j <= 0 (left) and j >= n+1 (right).
ConditionSums fdd_condition(const CoefficientSeq& seq, const TailModel& model, std::int64_t n, double r = 1.0);

struct ConditionReport {
  std::vector<std::int64_t> n_values;
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> truncation_bound;
  double r = 1.0;
  double threshold = 1e-2;
  bool left_trend = false;
  bool right_trend = false;

  bool consistent() const { return left_trend && right_trend; }
};

/// True when the last three values decrease strictly (or stay at exactly 0)
/// and the final value is below threshold.
bool trend_to_zero(std::span<const double> values, double threshold);

ConditionReport fdd_condition_trend(const CoefficientSeq& seq, const TailModel& model,
                                    const std::vector<std::int64_t>& n_list, double r = 1.0,
                                    double threshold = 1e-2);

struct SimplifiedSums {
  double left = 0.0;
  double right = 0.0;
  double sup_d_left = 0.0;
  double sup_d_right = 0.0;
  std::int64_t j_n = 0;
};

/// Boundary sums restricted to j <= -j_n and j >= n + j_n. j_n = 0 selects
/// floor(sqrt(n)).
SimplifiedSums simplified_condition(const CoefficientSeq& seq, const TailModel& model, std::int64_t n,
                                    std::int64_t j_n = 0);

enum class Verdict { holds, fails, inapplicable };
std::string to_string(Verdict v);

struct CorollaryResult {
  std::string name;
  Verdict verdict = Verdict::inapplicable;
  std::map<std::string, double> constants;
  std::string note;
};

CorollaryResult check_c41(const CoefficientSeq& seq, const TailModel& model, double beta);
CorollaryResult check_c42(const CoefficientSeq& seq, const TailModel& model);
CorollaryResult check_c43(const CoefficientSeq& seq, const TailModel& model);
/// Scans j in [0, j_scan] (and its mirror) and window lengths 1, 2, 4, ...
/// up to n_scan; 0 selects a range covering the materialised support.
CorollaryResult check_c45(const CoefficientSeq& seq, const TailModel& model, double gamma,
                          std::int64_t j_scan = 0, std::int64_t n_scan = 0);

/// (1/n) sum_{k >= 1} (k ^ n) |b_k| with b[0] = b_1; `tail_mass` bounds
/// sum_{k > b.size()} |b_k| and is added as is.
double cesaro_average(std::span<const double> b, std::int64_t n, double tail_mass = 0.0);

/// sum_j |c_{n,j}|^alpha h(1/|c_{n,j}|) for one row.
double array_row_sum(std::span<const double> row, const TailModel& model);

using ArrayRow = std::function<std::vector<double>(std::int64_t n)>;
std::vector<double> array_criterion(const ArrayRow& rows, const TailModel& model,
                                    const std::vector<std::int64_t>& n_list);

/// Row n of the array (A - d_{n,j}) / a_n, 1 <= j <= n.
std::vector<double> interior_array_row(const CoefficientSeq& seq, const TailModel& model, std::int64_t n);

/// j_n for n = 1..n_max (index 0 unused) built from the blocks N_m of the
/// constructive argument: j_n = m on [N_m, N_{m+1}).
std::vector<std::int64_t> select_jn(const ArrayRow& rows, std::int64_t n_max);

struct TruncatedMoments {
  double second_below = 0.0;  // E[Y^2 1(|Y| <= x)]
  double first_below = 0.0;   // E[|Y| 1(|Y| <= x)]
  double first_above = 0.0;   // E[|Y| 1(|Y| > x)]
};

TruncatedMoments truncated_moments(std::span<const double> sample, double x);

struct MomentBound {
  std::string part;
  double fit_x = 0.0;
  double constant = 0.0;
  std::vector<double> xs;
  std::vector<double> estimates;
  std::vector<double> bounds;
  bool passed = false;
};

/// Fits each applicable bound of the moment lemma at the smallest x with a
/// positive estimate and checks every x against slack times the fitted bound.
std::vector<MomentBound> moment_bound_suite(const TailModel& model, std::span<const double> sample,
                                            const std::vector<double>& xs, double slack = 3.0);

std::string to_json(const ConditionReport& report);

}  // namespace heavylin
