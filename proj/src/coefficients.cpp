#include "heavylin/coefficients.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "heavylin/error.hpp"
#include "heavylin/numeric.hpp"

namespace heavylin {

// ---------------------------------------------------------------------------
// SignSpec

int SignSpec::sign_at(std::int64_t j) const {
  switch (pattern) {
    case Pattern::positive:
      return 1;
    case Pattern::alternating:
      return (j % 2 == 0) ? 1 : -1;
    case Pattern::mask: {
      const auto size = static_cast<std::int64_t>(mask.size());
      const std::int64_t idx = ((j % size) + size) % size;
      return mask[static_cast<std::size_t>(idx)];
    }
  }
  return 1;
}

std::string SignSpec::to_string() const {
  switch (pattern) {
    case Pattern::positive:
      return "positive";
    case Pattern::alternating:
      return "alternating";
    case Pattern::mask: {
      std::string out;
      for (int s : mask) out += s > 0 ? '+' : '-';
      return out;
    }
  }
  return "positive";
}

SignSpec SignSpec::parse(const std::string& text) {
  SignSpec spec;
  if (text.empty() || text == "positive") return spec;
  if (text == "alternating") {
    spec.pattern = Pattern::alternating;
    return spec;
  }
  spec.pattern = Pattern::mask;
  for (char ch : text) {
    if (ch == '+') {
      spec.mask.push_back(1);
    } else if (ch == '-') {
      spec.mask.push_back(-1);
    } else {
      throw InvalidArgument("sign spec must be 'positive', 'alternating' or a +/- mask, got '" + text + "'");
    }
  }
  return spec;
}

double TailShape::operator()(double x) const {
  if (geometric_ratio > 0.0) return scale * std::pow(geometric_ratio, x);
  double v = scale * std::pow(x, -power);
  if (log_power != 0.0) v *= std::pow(std::log(x), -log_power);
  return v;
}

double TailShape::log_at(double log_x) const {
  if (geometric_ratio > 0.0) return std::log(scale) + std::exp(log_x) * std::log(geometric_ratio);
  double v = std::log(scale) - power * log_x;
  if (log_power != 0.0) v -= log_power * std::log(log_x);
  return v;
}

double TailShape::log_power_density(double s, double beta) const {
  if (geometric_ratio > 0.0) return beta * log_at(s) + s;
  double k = 1.0 - power * beta;
  if (std::abs(k) < 1e-12) k = 0.0;
  double v = beta * std::log(scale) + k * s;
  if (log_power != 0.0) v -= log_power * beta * std::log(s);
  return v;
}

// ---------------------------------------------------------------------------
// CoefficientSeq

CoefficientSeq::CoefficientSeq() { build_prefix(); }

void CoefficientSeq::build_prefix() {
  // Trim zero edges so [lo, hi] is the tight support.
  auto first = std::find_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; });
  if (first == values_.end()) {
    values_.clear();
    lo_ = 0;
  } else {
    auto last = std::find_if(values_.rbegin(), values_.rend(), [](double v) { return v != 0.0; });
    const auto lead = std::distance(values_.begin(), first);
    const auto trail = std::distance(values_.rbegin(), last);
    values_.erase(values_.end() - trail, values_.end());
    values_.erase(values_.begin(), values_.begin() + lead);
    lo_ += lead;
  }
  prefix_hi_.assign(values_.size() + 1, 0.0);
  prefix_lo_.assign(values_.size() + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += values_[i];
    prefix_hi_[i + 1] = acc.high();
    prefix_lo_[i + 1] = acc.low();
  }
}

CoefficientSeq CoefficientSeq::finite_support(std::int64_t offset, std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("coefficients must be finite");
  }
  CoefficientSeq seq;
  seq.kind_ = Kind::finite_support;
  seq.lo_ = offset;
  std::ostringstream os;
  os << "finite_support(offset=" << offset << ", values=[";
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << values[i];
  os << "])";
  seq.description_ = os.str();
  seq.values_ = std::move(values);
  seq.build_prefix();
  return seq;
}

namespace {

void check_window(std::int64_t window) {
  if (window < 1) throw InvalidArgument("window must be a positive integer");
  if (window > 50'000'000) throw InvalidArgument("window too large to materialise");
}

}  // namespace

CoefficientSeq CoefficientSeq::power_log(double alpha, double eps, std::int64_t window, SignSpec signs) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidArgument("power_log alpha must lie in (0, 2)");
  if (!(eps > 0.0)) throw InvalidArgument("power_log eps must be positive");
  check_window(window);
  CoefficientSeq seq;
  seq.kind_ = Kind::power_log;
  seq.lo_ = -window;
  seq.window_ = window;
  seq.values_.assign(static_cast<std::size_t>(2 * window + 1), 0.0);
  const double p = 1.0 / alpha;
  const double lp = (1.0 + eps) / alpha;
  for (std::int64_t j = -window; j <= window; ++j) {
    const auto aj = static_cast<double>(j < 0 ? -j : j);
    if (aj < 3) continue;
    seq.values_[static_cast<std::size_t>(j + window)] =
        signs.sign_at(j) * std::pow(aj, -p) * std::pow(std::log(aj), -lp);
  }
  seq.tail_ = {TailShape{1.0, p, lp, 0.0}};
  seq.tail_exact_ = true;
  std::ostringstream os;
  os << "power_log(alpha=" << alpha << ", eps=" << eps << ", window=" << window
     << ", signs=" << signs.to_string() << ")";
  seq.description_ = os.str();
  seq.build_prefix();
  return seq;
}

CoefficientSeq CoefficientSeq::geometric(double ratio, std::int64_t window, SignSpec signs) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("geometric ratio must lie in (0, 1)");
  check_window(window);
  CoefficientSeq seq;
  seq.kind_ = Kind::geometric;
  seq.lo_ = -window;
  seq.window_ = window;
  seq.values_.resize(static_cast<std::size_t>(2 * window + 1));
  for (std::int64_t j = -window; j <= window; ++j) {
    seq.values_[static_cast<std::size_t>(j + window)] =
        signs.sign_at(j) * std::pow(ratio, static_cast<double>(j < 0 ? -j : j));
  }
  seq.tail_ = {TailShape{1.0, 0.0, 0.0, ratio}};
  seq.tail_exact_ = true;
  std::ostringstream os;
  os << "geometric(ratio=" << ratio << ", window=" << window << ", signs=" << signs.to_string() << ")";
  seq.description_ = os.str();
  seq.build_prefix();
  return seq;
}

CoefficientSeq CoefficientSeq::power(double exponent, std::int64_t window, SignSpec signs) {
  if (!(exponent > 0.0)) throw InvalidArgument("power exponent must be positive");
  check_window(window);
  CoefficientSeq seq;
  seq.kind_ = Kind::power;
  seq.lo_ = -window;
  seq.window_ = window;
  seq.values_.assign(static_cast<std::size_t>(2 * window + 1), 0.0);
  for (std::int64_t j = -window; j <= window; ++j) {
    if (j == 0) continue;
    seq.values_[static_cast<std::size_t>(j + window)] =
        signs.sign_at(j) * std::pow(static_cast<double>(j < 0 ? -j : j), -exponent);
  }
  seq.tail_ = {TailShape{1.0, exponent, 0.0, 0.0}};
  seq.tail_exact_ = true;
  std::ostringstream os;
  os << "power(exponent=" << exponent << ", window=" << window << ", signs=" << signs.to_string() << ")";
  seq.description_ = os.str();
  seq.build_prefix();
  return seq;
}

std::string CoefficientSeq::kind_name() const {
  switch (kind_) {
    case Kind::finite_support:
      return "finite_support";
    case Kind::power_log:
      return "power_log";
    case Kind::geometric:
      return "geometric";
    case Kind::power:
      return "power";
    case Kind::derived:
      return "derived";
  }
  return "derived";
}

double CoefficientSeq::tail_majorant(double x) const {
  double total = 0.0;
  for (const auto& t : tail_) total += t(x);
  return total;
}

double CoefficientSeq::coeff(std::int64_t j) const {
  if (values_.empty() || j < lo_ || j > hi()) return 0.0;
  return values_[static_cast<std::size_t>(j - lo_)];
}

namespace {

inline std::size_t prefix_index(std::int64_t m, std::int64_t lo, std::size_t len) {
  const std::int64_t idx = m - lo + 1;
  if (idx <= 0) return 0;
  if (idx >= static_cast<std::int64_t>(len)) return len;
  return static_cast<std::size_t>(idx);
}

}  // namespace

double CoefficientSeq::prefix(std::int64_t m) const {
  const std::size_t i = prefix_index(m, lo_, values_.size());
  return prefix_hi_[i] + prefix_lo_[i];
}

double CoefficientSeq::d(std::int64_t n, std::int64_t j) const {
  if (n < 1) throw InvalidArgument("d_{n,j} requires n >= 1");
  const std::size_t a = prefix_index(n - j, lo_, values_.size());
  const std::size_t b = prefix_index(-j, lo_, values_.size());
  return (prefix_hi_[a] - prefix_hi_[b]) + (prefix_lo_[a] - prefix_lo_[b]);
}

Aggregates CoefficientSeq::aggregates() const {
  CompensatedSum total, plus, minus;
  for (double c : values_) {
    total += c;
    if (c > 0) plus += c;
    if (c < 0) minus += -c;
  }
  Aggregates out;
  out.A = total.value();
  out.A_plus = plus.value();
  out.A_minus = minus.value();
  CompensatedSum abs_total(out.A_plus);
  abs_total += out.A_minus;
  out.A_abs = abs_total.value();
  out.tail_bound = power_sum(1.0).tail_bound;
  return out;
}

bool power_series_diverges(const TailShape& shape, double beta, double h_log_index) {
  if (shape.geometric_ratio > 0.0) return false;
  const double exponent = shape.power * beta;
  if (exponent < 1.0 - 1e-12) return true;
  if (exponent > 1.0 + 1e-12) return false;
  return shape.log_power * beta - h_log_index <= 1.0 + 1e-12;
}

SeriesSum CoefficientSeq::power_sum(double beta, const SlowlyVarying* h) const {
  if (!(beta > 0.0)) throw InvalidArgument("power sum exponent must be positive");
  auto term = [&](double c) {
    const double a = std::abs(c);
    if (a == 0.0) return 0.0;
    const double v = std::pow(a, beta);
    return h ? v * (*h)(1.0 / a) : v;
  };
  SeriesSum out;
  CompensatedSum acc;
  for (double c : values_) acc += term(c);
  out.partial = acc.value();
  if (tail_.empty()) return out;

  const double h_index = h ? h->log_index() : 0.0;
  bool majorant_diverges = false;
  for (const auto& t : tail_) majorant_diverges = majorant_diverges || power_series_diverges(t, beta, h_index);
  if (majorant_diverges) {
    out.tail_bound = std::numeric_limits<double>::infinity();
    out.divergent = tail_is_exact();
    return out;
  }
  // Both sides of a two-sided family: 2 * int_W^inf term(m(x)) dx, evaluated
  // in s = log x so that far tails neither underflow nor overflow.
  const double log_w = std::log(static_cast<double>(std::max<std::int64_t>(window_, 2)));
  // log m(s) and beta * log m(s) + s, with m the sum of the tail terms.
  auto log_terms = [&](double s) {
    std::size_t top = 0;
    std::vector<double> logs(tail_.size());
    for (std::size_t i = 0; i < tail_.size(); ++i) {
      logs[i] = tail_[i].log_at(s);
      if (logs[i] > logs[top]) top = i;
    }
    const double hi = logs[top];
    if (!std::isfinite(hi)) return std::pair<double, double>{hi, hi};
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - hi);
    const double lacc = std::log(acc);
    return std::pair<double, double>{hi + lacc, tail_[top].log_power_density(s, beta) + beta * lacc};
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double integral = integrator.integrate(
      [&](double u) {
        const double s = log_w + u;
        const auto [lm, density] = log_terms(s);
        if (lm == -std::numeric_limits<double>::infinity()) return 0.0;
        double v = density;
        if (h) v += h->log_at(-lm);
        return std::exp(v);
      },
      0.0, std::numeric_limits<double>::infinity(), 1e-10, &err);
  if (!std::isfinite(integral) || err > 1e-6 * std::max(integral, 1e-300)) {
    out.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    out.tail_bound = 2.0 * (integral + err);
  }
  return out;
}

CoefficientSeq CoefficientSeq::map_values(double (*fn)(double)) const {
  CoefficientSeq out = *this;
  out.kind_ = Kind::derived;
  for (double& v : out.values_) v = fn(v);
  out.build_prefix();
  return out;
}

CoefficientSeq CoefficientSeq::positive_part() const {
  CoefficientSeq out = map_values([](double c) { return c > 0.0 ? c : 0.0; });
  out.tail_exact_ = false;
  out.description_ = "positive_part(" + description_ + ")";
  return out;
}

CoefficientSeq CoefficientSeq::negative_part() const {
  CoefficientSeq out = map_values([](double c) { return c < 0.0 ? -c : 0.0; });
  out.tail_exact_ = false;
  out.description_ = "negative_part(" + description_ + ")";
  return out;
}

CoefficientSeq CoefficientSeq::absolute() const {
  CoefficientSeq out = map_values([](double c) { return std::abs(c); });
  out.description_ = "abs(" + description_ + ")";
  return out;
}

CoefficientSeq CoefficientSeq::scaled(double factor) const {
  CoefficientSeq out = *this;
  out.kind_ = Kind::derived;
  for (double& v : out.values_) v *= factor;
  for (auto& t : out.tail_) t.scale *= std::abs(factor);
  if (factor == 0.0) out.tail_.clear();
  std::ostringstream os;
  os << factor << " * " << description_;
  out.description_ = os.str();
  out.build_prefix();
  return out;
}

CoefficientSeq operator+(const CoefficientSeq& a, const CoefficientSeq& b) {
  if (a.has_tail() && b.has_tail() && a.window_ != b.window_) {
    throw InvalidArgument("cannot add parametric sequences with different windows");
  }
  CoefficientSeq out;
  out.kind_ = CoefficientSeq::Kind::derived;
  out.description_ = a.description_ + " + " + b.description_;
  out.window_ = std::max(a.window_, b.window_);
  out.tail_ = a.tail_;
  out.tail_.insert(out.tail_.end(), b.tail_.begin(), b.tail_.end());
  out.tail_exact_ = false;
  if (a.empty() && b.empty()) {
    out.build_prefix();
    return out;
  }
  std::int64_t lo = 0, hi = 0;
  if (a.empty()) {
    lo = b.lo();
    hi = b.hi();
  } else if (b.empty()) {
    lo = a.lo();
    hi = a.hi();
  } else {
    lo = std::min(a.lo(), b.lo());
    hi = std::max(a.hi(), b.hi());
  }
  out.lo_ = lo;
  out.values_.resize(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t j = lo; j <= hi; ++j) {
    out.values_[static_cast<std::size_t>(j - lo)] = a.coeff(j) + b.coeff(j);
  }
  out.build_prefix();
  return out;
}

std::string CoefficientSeq::describe() const {
  return description_.empty() ? "finite_support(offset=0, values=[])" : description_;
}

SeriesSum three_series_sum(const CoefficientSeq& seq, const TailModel& model) {
  model.validate();
  return seq.power_sum(model.alpha, &model.h);
}

Aggregates aggregates(const CoefficientSeq& seq) { return seq.aggregates(); }

}  // namespace heavylin
