#include "heavylin/linproc.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "heavylin/error.hpp"
#include "heavylin/numeric.hpp"

namespace heavylin {

namespace {

std::int64_t grid_index(std::int64_t n, double t) {
  const double x = t * static_cast<double>(n);
  const double r = std::round(x);
  const double k = std::abs(x - r) < 1e-9 ? r : std::floor(x);
  return static_cast<std::int64_t>(k);
}

}  // namespace

void InnovationWindow::require(std::int64_t a, std::int64_t b) const {
  if (a > b || covers(a, b)) return;
  std::ostringstream os;
  os << "innovation window [" << lo << ", " << hi() << "] is missing indices";
  if (values.empty()) {
    os << " [" << a << ", " << b << "]";
  } else {
    if (a < lo) os << " [" << a << ", " << std::min(b, lo - 1) << "]";
    if (b > hi()) os << " [" << std::max(a, hi() + 1) << ", " << b << "]";
  }
  throw RangeError(os.str());
}

std::pair<std::int64_t, std::int64_t> required_innovations(const CoefficientSeq& seq, std::int64_t n) {
  if (seq.empty()) return {1, n};
  return {1 - seq.hi(), n - seq.lo()};
}

InnovationWindow draw_innovations(const InnovationSampler& sampler, std::int64_t lo, std::int64_t hi,
                                  Engine& eng) {
  InnovationWindow w;
  w.lo = lo;
  w.values.resize(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo + 1, 0)));
  sampler.fill(eng, w.values.data(), w.values.size());
  return w;
}

CadlagPath::CadlagPath(std::int64_t n_, std::vector<double> v) : n(n_), values(std::move(v)) {
  if (n < 1) throw InvalidArgument("path resolution must be positive");
  if (static_cast<std::int64_t>(values.size()) != n + 1) {
    throw InvalidArgument("path needs n + 1 values");
  }
}

double CadlagPath::value(double t) const {
  if (t < 0.0 || t > 1.0) throw InvalidArgument("path time must lie in [0, 1]");
  return at(std::min(grid_index(n, t), n));
}

void CadlagPath::write_csv(std::ostream& out) const {
  out << "t,value\n";
  out << std::setprecision(17);
  for (std::int64_t k = 0; k <= n; ++k) {
    out << static_cast<double>(k) / static_cast<double>(n) << ',' << at(k) << '\n';
  }
}

std::string CadlagPath::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

namespace {

template <class Op>
CadlagPath combine(const CadlagPath& x, const CadlagPath& y, Op op) {
  if (x.n != y.n) throw InvalidArgument("grid resolution mismatch");
  std::vector<double> v(x.values.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(x.values[k], y.values[k]);
  return CadlagPath(x.n, std::move(v));
}

}  // namespace

CadlagPath operator+(const CadlagPath& x, const CadlagPath& y) {
  return combine(x, y, [](double a, double b) { return a + b; });
}

CadlagPath operator-(const CadlagPath& x, const CadlagPath& y) {
  return combine(x, y, [](double a, double b) { return a - b; });
}

CadlagPath operator*(double a, const CadlagPath& x) {
  std::vector<double> v(x.values);
  for (double& e : v) e *= a;
  return CadlagPath(x.n, std::move(v));
}

ProcessValues build_process(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t i_lo,
                            std::int64_t i_hi) {
  if (i_hi < i_lo) throw InvalidArgument("empty index range");
  ProcessValues out;
  out.first = i_lo;
  out.values.assign(static_cast<std::size_t>(i_hi - i_lo + 1), 0.0);
  if (seq.has_tail()) out.truncation_bound = seq.aggregates().tail_bound;
  if (seq.empty()) return out;
  y.require(i_lo - seq.hi(), i_hi - seq.lo());
  const auto coeffs = seq.values();
  const std::size_t len = out.values.size();
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    const double c = coeffs[t];
    if (c == 0.0) continue;
    const std::int64_t j = seq.lo() + static_cast<std::int64_t>(t);
    const double* src = y.values.data() + (i_lo - j - y.lo);
    double* dst = out.values.data();
    for (std::size_t i = 0; i < len; ++i) dst[i] += c * src[i];
  }
  return out;
}

CadlagPath partial_sum_path(std::span<const double> x, double a_n) {
  if (!(a_n > 0.0)) throw InvalidArgument("a_n must be positive");
  if (x.empty()) throw InvalidArgument("partial sums need at least one value");
  std::vector<double> v = compensated_cumsum(x);
  for (double& e : v) e /= a_n;
  return CadlagPath(static_cast<std::int64_t>(x.size()), std::move(v));
}

Decomposition decompose_path(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t n,
                             double t, double a_n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (t < 0.0 || t > 1.0) throw InvalidArgument("t must lie in [0, 1]");
  if (!(a_n > 0.0)) throw InvalidArgument("a_n must be positive");
  Decomposition out;
  const std::int64_t k = std::min(grid_index(n, t), n);
  if (k == 0 || seq.empty()) return out;
  const std::int64_t j_lo = 1 - seq.hi();
  const std::int64_t j_hi = k - seq.lo();
  y.require(j_lo, j_hi);
  CompensatedSum minus, zero, plus;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const double term = seq.d(k, j) * y.at(j);
    if (j <= 0) {
      minus += term;
    } else if (j <= k) {
      zero += term;
    } else {
      plus += term;
    }
  }
  out.minus = minus.value() / a_n;
  out.zero = zero.value() / a_n;
  out.plus = plus.value() / a_n;
  return out;
}

CadlagPath sum_path(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t n, double a_n) {
  if (!seq.empty() && seq.lo() == 0 && seq.hi() == 0) {
    CadlagPath z = innovation_path(y, n, a_n);
    const double c = seq.coeff(0);
    for (double& v : z.values) v *= c;
    return z;
  }
  const ProcessValues x = build_process(seq, y, 1, n);
  return partial_sum_path(x.values, a_n);
}

CadlagPath innovation_path(const InnovationWindow& y, std::int64_t n, double a_n) {
  y.require(1, n);
  return partial_sum_path(std::span<const double>(y.values.data() + (1 - y.lo), static_cast<std::size_t>(n)),
                          a_n);
}

SplitPaths split_pm_paths(const CoefficientSeq& seq, const InnovationWindow& y, std::int64_t n, double a_n) {
  return SplitPaths{sum_path(seq.positive_part(), y, n, a_n), sum_path(seq.negative_part(), y, n, a_n),
                    sum_path(seq.absolute(), y, n, a_n)};
}

}  // namespace heavylin
