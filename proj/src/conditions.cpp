#include "heavylin/conditions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "heavylin/error.hpp"
#include "heavylin/numeric.hpp"

namespace heavylin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double condition_term(double d, double scale, const TailModel& model) {
  const double a = std::abs(d);
  if (a == 0.0) return 0.0;
  return std::pow(a / scale, model.alpha) * model.h(scale / a);
}

double window_truncation(const CoefficientSeq& seq, const TailModel& model, std::int64_t n, double scale) {
  if (!seq.has_tail()) return 0.0;
  if (model.alpha > 1.0 || model.h.kind() != SlowlyVarying::Kind::constant) return kNaN;
  const SeriesSum tail = seq.power_sum(model.alpha);
  return static_cast<double>(n) * tail.tail_bound * model.h.scale() / std::pow(scale, model.alpha);
}

}  // namespace

ConditionSums fdd_condition(const CoefficientSeq& seq, const TailModel& model, std::int64_t n, double r) {
  model.validate();
  if (n < 1) throw InvalidArgument("n must be positive");
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  ConditionSums out;
  if (seq.empty()) return out;
  const double scale = r * norming_constant(model, static_cast<std::uint64_t>(n));
  CompensatedSum left, right;
  for (std::int64_t j = 1 - seq.hi(); j <= 0; ++j) left += condition_term(seq.d(n, j), scale, model);
  for (std::int64_t j = n + 1; j <= n - seq.lo(); ++j) right += condition_term(seq.d(n, j), scale, model);
  out.left = left.value();
  out.right = right.value();
  out.truncation_bound = window_truncation(seq, model, n, scale);
  return out;
}

bool trend_to_zero(std::span<const double> values, double threshold) {
  if (values.empty()) return false;
  const std::size_t start = values.size() >= 3 ? values.size() - 3 : 0;
  for (std::size_t i = start; i + 1 < values.size(); ++i) {
    const bool both_zero = values[i] == 0.0 && values[i + 1] == 0.0;
    if (!(values[i + 1] < values[i]) && !both_zero) return false;
  }
  return values.back() < threshold;
}

ConditionReport fdd_condition_trend(const CoefficientSeq& seq, const TailModel& model,
                                    const std::vector<std::int64_t>& n_list, double r, double threshold) {
  if (n_list.empty()) throw InvalidArgument("n list is empty");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw InvalidArgument("n list must be strictly increasing");
  }
  ConditionReport rep;
  rep.r = r;
  rep.threshold = threshold;
  for (std::int64_t n : n_list) {
    const ConditionSums s = fdd_condition(seq, model, n, r);
    rep.n_values.push_back(n);
    rep.left.push_back(s.left);
    rep.right.push_back(s.right);
    rep.truncation_bound.push_back(s.truncation_bound);
  }
  rep.left_trend = trend_to_zero(rep.left, threshold);
  rep.right_trend = trend_to_zero(rep.right, threshold);
  return rep;
}

SimplifiedSums simplified_condition(const CoefficientSeq& seq, const TailModel& model, std::int64_t n,
                                    std::int64_t j_n) {
  model.validate();
  if (n < 2) throw InvalidArgument("n must be at least 2");
  if (j_n == 0) j_n = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n))));
  if (j_n < 1 || j_n >= n) throw InvalidArgument("j_n must satisfy 1 <= j_n < n");
  SimplifiedSums out;
  out.j_n = j_n;
  if (seq.empty()) return out;
  const double a_n = norming_constant(model, static_cast<std::uint64_t>(n));
  CompensatedSum left, right;
  for (std::int64_t j = 1 - seq.hi(); j <= -j_n; ++j) {
    const double d = seq.d(n, j);
    left += condition_term(d, a_n, model);
    out.sup_d_left = std::max(out.sup_d_left, std::abs(d));
  }
  for (std::int64_t j = std::max(n + j_n, n + 1); j <= n - seq.lo(); ++j) {
    const double d = seq.d(n, j);
    right += condition_term(d, a_n, model);
    out.sup_d_right = std::max(out.sup_d_right, std::abs(d));
  }
  out.left = left.value();
  out.right = right.value();
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inapplicable:
      return "inapplicable";
  }
  return "inapplicable";
}

CorollaryResult check_c41(const CoefficientSeq& seq, const TailModel& model, double beta) {
  model.validate();
  if (!(beta > 0.0 && beta < model.alpha && beta <= 1.0)) {
    throw InvalidArgument("C4.1 needs 0 < beta < alpha and beta <= 1");
  }
  CorollaryResult res;
  res.name = "C4.1";
  const SeriesSum s = seq.power_sum(beta);
  res.constants = {{"beta", beta}, {"partial_sum", s.partial}, {"tail_bound", s.tail_bound}};
  res.verdict = s.finite() ? Verdict::holds : Verdict::fails;
  if (s.divergent) res.note = "sum of |c_j|^beta diverges";
  return res;
}

CorollaryResult check_c42(const CoefficientSeq& seq, const TailModel& model) {
  model.validate();
  CorollaryResult res;
  res.name = "C4.2";
  if (model.alpha <= 1.0) {
    res.note = "requires alpha in (1, 2)";
    return res;
  }
  const SeriesSum s = seq.power_sum(1.0);
  res.constants = {{"partial_sum", s.partial}, {"tail_bound", s.tail_bound}};
  res.verdict = s.finite() ? Verdict::holds : Verdict::fails;
  return res;
}

CorollaryResult check_c43(const CoefficientSeq& seq, const TailModel& model) {
  model.validate();
  CorollaryResult res;
  res.name = "C4.3";
  if (model.alpha > 1.0) {
    res.note = "requires alpha <= 1";
    return res;
  }
  const auto m = model.h.bounded_ratio_constant();
  if (!m) {
    res.note = "h has no bounded ratio constant";
    return res;
  }
  const SeriesSum s = seq.power_sum(model.alpha);
  const SeriesSum well = three_series_sum(seq, model);
  res.constants = {{"M", *m}, {"partial_sum", s.partial}, {"tail_bound", s.tail_bound}};
  res.verdict = s.finite() && well.finite() ? Verdict::holds : Verdict::fails;
  return res;
}

namespace {

// Range-maximum table over |c| on the materialised support.
class RangeMax {
 public:
  explicit RangeMax(std::vector<double> v) {
    table_.push_back(std::move(v));
    const std::size_t n = table_[0].size();
    for (std::size_t w = 1; 2 * w <= n; w *= 2) {
      const auto& prev = table_.back();
      std::vector<double> next(n - 2 * w + 1);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(prev[i], prev[i + w]);
      table_.push_back(std::move(next));
    }
  }
  // max over [a, b], inclusive, a <= b.
  double query(std::size_t a, std::size_t b) const {
    const std::size_t len = b - a + 1;
    const auto level = static_cast<std::size_t>(std::bit_width(len) - 1);
    return std::max(table_[level][a], table_[level][b + 1 - (std::size_t{1} << level)]);
  }

 private:
  std::vector<std::vector<double>> table_;
};

struct ScanResult {
  double k_plus = 1.0;
  double k_minus = 1.0;
};

ScanResult scan_c45(const CoefficientSeq& seq, double alpha, double expo, std::int64_t j_scan,
                    std::int64_t n_scan) {
  // Work on the index range [lo, hi] padded by the scan so that indices
  // outside the support read as exact zeros.
  const std::int64_t lo = std::min<std::int64_t>(seq.empty() ? 0 : seq.lo(), -j_scan - n_scan);
  const std::int64_t hi = std::max<std::int64_t>(seq.empty() ? 0 : seq.hi(), j_scan + n_scan);
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> abs_c(len);
  std::vector<double> pw(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double c = std::abs(seq.coeff(lo + static_cast<std::int64_t>(i)));
    abs_c[i] = c;
    pw[i] = c == 0.0 ? 0.0 : std::pow(c, alpha);
  }
  const std::vector<double> cum = compensated_cumsum(pw);
  const RangeMax rmax(abs_c);
  auto ratio = [&](std::int64_t a, std::int64_t b) {
    const auto ia = static_cast<std::size_t>(a - lo);
    const auto ib = static_cast<std::size_t>(b - lo);
    const double m = rmax.query(ia, ib);
    const double s = cum[ib + 1] - cum[ia];
    if (m == 0.0) return 1.0;
    return std::pow(m, expo) / s;
  };
  ScanResult out{0.0, 0.0};
  for (std::int64_t j = 0; j <= j_scan; ++j) {
    for (std::int64_t w = 1; w <= n_scan; w *= 2) {
      out.k_plus = std::max(out.k_plus, ratio(j + 1, j + w));
      out.k_minus = std::max(out.k_minus, ratio(-j - w, -j - 1));
    }
  }
  return out;
}

}  // namespace

CorollaryResult check_c45(const CoefficientSeq& seq, const TailModel& model, double gamma, std::int64_t j_scan,
                          std::int64_t n_scan) {
  model.validate();
  CorollaryResult res;
  res.name = "C4.5";
  if (!(gamma > 0.0 && gamma < model.alpha)) throw InvalidArgument("C4.5 needs 0 < gamma < alpha");
  if (model.alpha >= 1.0) {
    res.note = "requires alpha < 1";
    return res;
  }
  if (j_scan < 0 || n_scan < 0) throw InvalidArgument("scan bounds must be nonnegative");
  if (j_scan == 0 || n_scan == 0) {
    std::int64_t reach = 1;
    if (!seq.empty()) reach = std::max({reach, std::abs(seq.lo()), std::abs(seq.hi())});
    if (seq.has_tail()) {
      const std::int64_t half = std::max<std::int64_t>(seq.window() / 2, 2);
      if (j_scan == 0) j_scan = half;
      if (n_scan == 0) n_scan = half;
    } else {
      if (j_scan == 0) j_scan = 2 * reach;
      if (n_scan == 0) n_scan = std::int64_t{1} << std::bit_width(static_cast<std::uint64_t>(4 * reach + 2));
    }
  }
  const double alpha = model.alpha;
  const double expo = (1.0 - alpha) * (alpha - gamma) / (1.0 - alpha + gamma);
  const ScanResult full = scan_c45(seq, alpha, expo, j_scan, n_scan);
  const ScanResult half = scan_c45(seq, alpha, expo, std::max<std::int64_t>(j_scan / 2, 1),
                                   std::max<std::int64_t>(n_scan / 2, 1));
  const SeriesSum s = seq.power_sum(alpha);
  res.constants = {{"gamma", gamma},
                   {"exponent", expo},
                   {"K_plus", full.k_plus},
                   {"K_minus", full.k_minus},
                   {"K_plus_half_scan", half.k_plus},
                   {"K_minus_half_scan", half.k_minus},
                   {"j_scan", static_cast<double>(j_scan)},
                   {"n_scan", static_cast<double>(n_scan)},
                   {"alpha_sum", s.partial},
                   {"alpha_sum_tail_bound", s.tail_bound}};
  const auto stable = [](double a, double b) { return std::isfinite(a) && a <= b * (1.0 + 1e-9); };
  const bool ok = s.finite() && stable(full.k_plus, half.k_plus) && stable(full.k_minus, half.k_minus);
  res.verdict = ok ? Verdict::holds : Verdict::fails;
  if (!ok) res.note = s.finite() ? "scanned supremum grows with the scan range" : "sum of |c_j|^alpha diverges";
  return res;
}

double cesaro_average(std::span<const double> b, std::int64_t n, double tail_mass) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (!(tail_mass >= 0.0)) throw InvalidArgument("tail mass must be nonnegative");
  CompensatedSum acc;
  const auto dn = static_cast<double>(n);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i + 1);
    acc += static_cast<double>(std::min(k, n)) * std::abs(b[i]);
  }
  return acc.value() / dn + tail_mass;
}

double array_row_sum(std::span<const double> row, const TailModel& model) {
  CompensatedSum acc;
  for (double c : row) {
    const double a = std::abs(c);
    if (a == 0.0) continue;
    acc += std::pow(a, model.alpha) * model.h(1.0 / a);
  }
  return acc.value();
}

std::vector<double> array_criterion(const ArrayRow& rows, const TailModel& model,
                                    const std::vector<std::int64_t>& n_list) {
  model.validate();
  std::vector<double> out;
  out.reserve(n_list.size());
  for (std::int64_t n : n_list) out.push_back(array_row_sum(rows(n), model));
  return out;
}

std::vector<double> interior_array_row(const CoefficientSeq& seq, const TailModel& model, std::int64_t n) {
  const double a_n = norming_constant(model, static_cast<std::uint64_t>(n));
  const double A = seq.aggregates().A;
  std::vector<double> row(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) row[static_cast<std::size_t>(j - 1)] = (A - seq.d(n, j)) / a_n;
  return row;
}

std::vector<std::int64_t> select_jn(const ArrayRow& rows, std::int64_t n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be positive");
  const auto m_max = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n_max))));
  // last_bad[m]: largest n with sum_{j <= m} |a_{n,j}| >= 1/m.
  std::vector<std::int64_t> last_bad(static_cast<std::size_t>(m_max + 1), 0);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::vector<double> row = rows(n);
    CompensatedSum acc;
    for (std::int64_t m = 1; m <= m_max; ++m) {
      if (m <= static_cast<std::int64_t>(row.size())) acc += std::abs(row[static_cast<std::size_t>(m - 1)]);
      if (acc.value() >= 1.0 / static_cast<double>(m)) last_bad[static_cast<std::size_t>(m)] = n;
    }
  }
  std::vector<std::int64_t> jn(static_cast<std::size_t>(n_max + 1), 0);
  std::int64_t prev = 0;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const std::int64_t start = std::max({prev + 1, m * m + 1, last_bad[static_cast<std::size_t>(m)] + 1});
    if (start > n_max) break;
    for (std::int64_t n = start; n <= n_max; ++n) jn[static_cast<std::size_t>(n)] = m;
    prev = start;
  }
  return jn;
}

TruncatedMoments truncated_moments(std::span<const double> sample, double x) {
  if (sample.empty()) throw InvalidArgument("empty sample");
  CompensatedSum sq, below, above;
  for (double y : sample) {
    const double a = std::abs(y);
    if (a <= x) {
      sq += a * a;
      below += a;
    } else {
      above += a;
    }
  }
  const auto n = static_cast<double>(sample.size());
  return {sq.value() / n, below.value() / n, above.value() / n};
}

std::vector<MomentBound> moment_bound_suite(const TailModel& model, std::span<const double> sample,
                                            const std::vector<double>& xs, double slack) {
  model.validate();
  if (xs.empty()) throw InvalidArgument("no evaluation points");
  std::vector<double> grid(xs);
  std::sort(grid.begin(), grid.end());
  std::vector<TruncatedMoments> est;
  for (double x : grid) est.push_back(truncated_moments(sample, x));

  auto run = [&](const std::string& part, double power, auto pick) {
    MomentBound b;
    b.part = part;
    b.xs = grid;
    for (const auto& e : est) b.estimates.push_back(pick(e));
    auto shape = [&](double x) { return std::pow(x, power) * model.h(x); };
    std::size_t fit = 0;
    while (fit < grid.size() && !(b.estimates[fit] > 0.0)) ++fit;
    if (fit == grid.size()) {
      b.passed = true;
      b.bounds.assign(grid.size(), 0.0);
      return b;
    }
    b.fit_x = grid[fit];
    b.constant = b.estimates[fit] / shape(grid[fit]);
    b.passed = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      b.bounds.push_back(slack * b.constant * shape(grid[i]));
      if (b.estimates[i] > b.bounds.back() * (1.0 + 1e-12)) b.passed = false;
    }
    return b;
  };

  std::vector<MomentBound> out;
  const double a = model.alpha;
  out.push_back(run("i", 2.0 - a, [](const TruncatedMoments& m) { return m.second_below; }));
  if (a < 1.0) out.push_back(run("ii", 1.0 - a, [](const TruncatedMoments& m) { return m.first_below; }));
  if (a > 1.0) out.push_back(run("iii", 1.0 - a, [](const TruncatedMoments& m) { return m.first_above; }));
  return out;
}

std::string to_json(const ConditionReport& report) {
  nlohmann::ordered_json j;
  j["r"] = report.r;
  j["threshold"] = report.threshold;
  j["n_values"] = report.n_values;
  j["left_sum"] = report.left;
  j["right_sum"] = report.right;
  auto& tb = j["truncation_bound"] = nlohmann::ordered_json::array();
  for (double t : report.truncation_bound) {
    if (std::isnan(t)) {
      tb.push_back(nullptr);
    } else {
      tb.push_back(t);
    }
  }
  j["left_trend"] = report.left_trend;
  j["right_trend"] = report.right_trend;
  return j.dump();
}

}  // namespace heavylin
