#include "heavylin/tail_innovations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heavylin/error.hpp"

namespace heavylin {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// SlowlyVarying

// Cumulative integral I(s) = int_0^s eps(e^u) du on a uniform grid in
// s = log x, interpolated with cubic Hermite pieces. Past s_max the integrand
// equals gamma0/u to double precision and is integrated in closed form.
struct SlowlyVarying::KaramataTable {
  static constexpr double s_max = 40.0;
  static constexpr int per_unit = 128;

  double gamma0;
  double step;
  std::vector<double> cumulative;

  explicit KaramataTable(double g) : gamma0(g), step(1.0 / per_unit) {
    const int nodes = static_cast<int>(s_max * per_unit) + 1;
    cumulative.assign(nodes, 0.0);
    for (int i = 1; i < nodes; ++i) {
      const double a = (i - 1) * step;
      const double b = i * step;
      const double simpson = (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b)) * step / 6.0;
      cumulative[i] = cumulative[i - 1] + simpson;
    }
  }

  double integrand(double s) const { return gamma0 / std::log(kE + std::exp(s)); }

  double integral(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= s_max) return cumulative.back() + gamma0 * std::log(s / s_max);
    const double pos = s / step;
    const auto i = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(i);
    const double y0 = cumulative[i];
    const double y1 = cumulative[i + 1];
    const double d0 = integrand(i * step) * step;
    const double d1 = integrand((i + 1) * step) * step;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * d1;
  }
};

SlowlyVarying::SlowlyVarying(Kind k, double scale, double shape)
    : kind_(k), scale_(scale), shape_(shape) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("slowly varying scale must be positive and finite");
  }
  if (!std::isfinite(shape)) throw InvalidArgument("slowly varying shape must be finite");
  if (k == Kind::karamata) table_ = std::make_shared<const KaramataTable>(shape);
}

SlowlyVarying SlowlyVarying::constant(double c) { return SlowlyVarying(Kind::constant, c, 0.0); }

SlowlyVarying SlowlyVarying::log_power(double rho, double c) {
  return SlowlyVarying(Kind::log_power, c, rho);
}

SlowlyVarying SlowlyVarying::karamata(double c_limit, double gamma0) {
  return SlowlyVarying(Kind::karamata, c_limit, gamma0);
}

double SlowlyVarying::operator()(double x) const {
  switch (kind_) {
    case Kind::constant:
      return scale_;
    case Kind::log_power:
      return scale_ * std::pow(std::log(kE + x), shape_);
    case Kind::karamata:
      return x <= 1.0 ? scale_ : scale_ * std::exp(table_->integral(std::log(x)));
  }
  return scale_;
}

double SlowlyVarying::log_at(double log_x) const {
  switch (kind_) {
    case Kind::constant:
      return std::log(scale_);
    case Kind::log_power: {
      const double l = log_x > 0.0 ? log_x + std::log1p(kE * std::exp(-log_x)) : std::log(kE + std::exp(log_x));
      return std::log(scale_) + shape_ * std::log(l);
    }
    case Kind::karamata:
      return std::log(scale_) + (log_x <= 0.0 ? 0.0 : table_->integral(log_x));
  }
  return std::log(scale_);
}

double SlowlyVarying::log_derivative(double x) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::log_power:
      return shape_ * x / ((kE + x) * std::log(kE + x));
    case Kind::karamata:
      return x <= 1.0 ? 0.0 : shape_ / std::log(kE + x);
  }
  return 0.0;
}

std::optional<double> SlowlyVarying::bounded_ratio_constant() const {
  // Nonincreasing members have M = 1; increasing log-type members are unbounded.
  if (kind_ == Kind::constant || shape_ <= 0.0) return 1.0;
  return std::nullopt;
}

std::string SlowlyVarying::kind_name() const {
  switch (kind_) {
    case Kind::constant:
      return "constant";
    case Kind::log_power:
      return "log_power";
    case Kind::karamata:
      return "karamata";
  }
  return "constant";
}

std::vector<double> SlowlyVarying::params() const {
  switch (kind_) {
    case Kind::constant:
      return {scale_};
    case Kind::log_power:
      return {shape_, scale_};
    case Kind::karamata:
      return {scale_, shape_};
  }
  return {scale_};
}

SlowlyVarying SlowlyVarying::from_spec(const std::string& kind, const std::vector<double>& params) {
  if (kind == "constant") {
    if (params.size() > 1) throw InvalidArgument("constant h takes at most one parameter (C)");
    return constant(params.empty() ? 1.0 : params[0]);
  }
  if (kind == "log_power") {
    if (params.empty() || params.size() > 2) {
      throw InvalidArgument("log_power h takes parameters (rho[, C])");
    }
    return log_power(params[0], params.size() > 1 ? params[1] : 1.0);
  }
  if (kind == "karamata") {
    if (params.size() != 2) throw InvalidArgument("karamata h takes parameters (c_limit, gamma0)");
    return karamata(params[0], params[1]);
  }
  throw InvalidArgument("unknown slowly varying kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// TailModel

void TailModel::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidArgument("alpha must lie in (0, 2)");
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw InvalidArgument("tail balance p, q must lie in [0, 1]");
  }
  if (std::abs(p + q - 1.0) > 1e-12) throw InvalidArgument("tail balance requires p + q = 1");
  if (alpha == 1.0 && std::abs(p - q) > 1e-12) {
    throw InvalidArgument("alpha = 1 requires a symmetric law (p = q = 1/2)");
  }
}

// ---------------------------------------------------------------------------
// InnovationSampler

InnovationSampler::InnovationSampler(const TailModel& model) : model_(model) {
  model_.validate();
  const double alpha = model_.alpha;
  const SlowlyVarying& h = model_.h;

  if (h.kind() == SlowlyVarying::Kind::constant) {
    x_min_ = std::pow(h.scale(), 1.0 / alpha);
  } else {
    // Bracket the root of log tail(x) = 0 in s = log x; tail -> inf as x -> 0.
    auto g = [&](double s) { return -alpha * s + std::log(h(std::exp(s))); };
    double lo = 0.0, hi = 0.0;
    while (g(hi) >= 0.0) {
      hi += 1.0;
      if (hi > 700.0) throw NumericalFault("tail function does not fall below 1");
    }
    lo = hi - 1.0;
    while (g(lo) < 0.0) {
      lo -= 1.0;
      if (lo < -700.0) throw NumericalFault("tail function does not exceed 1 near 0");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) >= 0.0 ? lo : hi) = mid;
    }
    x_min_ = std::exp(hi);
    // The tail must be strictly decreasing beyond x_min for the inversion to exist.
    const double s0 = hi;
    for (int i = 0; i <= 400; ++i) {
      const double s = s0 + (650.0 - s0) * i / 400.0;
      if (h.log_derivative(std::exp(s)) >= alpha) {
        throw NumericalFault("tail function x^-alpha h(x) is not invertible beyond its support point");
      }
    }
  }

  if (alpha > 1.0) {
    double abs_mean = 0.0;
    if (h.kind() == SlowlyVarying::Kind::constant) {
      abs_mean = x_min_ * alpha / (alpha - 1.0);
    } else {
      boost::math::quadrature::exp_sinh<double> integrator;
      double err = 0.0;
      const double tail_area = integrator.integrate(
          [&](double x) { return model_.tail(x); }, x_min_, std::numeric_limits<double>::infinity(),
          1e-12, &err);
      if (!std::isfinite(tail_area) || err > 1e-8 * std::max(1.0, tail_area)) {
        throw NumericalFault("quadrature for the innovation mean did not converge");
      }
      abs_mean = x_min_ + tail_area;
    }
    raw_mean_ = (model_.p - model_.q) * abs_mean;
    shift_ = model_.centered ? raw_mean_ : 0.0;
  } else {
    raw_mean_ = model_.p == model_.q ? std::numeric_limits<double>::quiet_NaN()
                                     : std::numeric_limits<double>::infinity();
    shift_ = 0.0;
  }
}

double InnovationSampler::survival(double x) const {
  if (x < x_min_) return 1.0;
  return std::min(1.0, model_.tail(x));
}

double InnovationSampler::tail_quantile(double u) const {
  if (!(u > 0.0)) throw InvalidArgument("tail quantile requires u > 0");
  if (u >= 1.0) return x_min_;
  const double alpha = model_.alpha;
  const SlowlyVarying& h = model_.h;
  if (h.kind() == SlowlyVarying::Kind::constant) return std::pow(h.scale() / u, 1.0 / alpha);

  // Safeguarded Newton on g(s) = log tail(e^s) - log u, decreasing in s.
  const double log_u = std::log(u);
  auto g = [&](double s) { return -alpha * s + std::log(h(std::exp(s))) - log_u; };
  double lo = std::log(x_min_);
  double hi = lo + std::max(1.0, -2.0 * log_u / alpha);
  while (g(hi) > 0.0) hi += hi - lo;
  double s = std::clamp(lo - log_u / alpha, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double gs = g(s);
    if (gs > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    const double slope = -alpha + h.log_derivative(std::exp(s));
    double next = s - gs / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s))) {
      s = next;
      break;
    }
    s = next;
  }
  return std::exp(s);
}

double InnovationSampler::draw(Engine& eng) const {
  const double p = model_.p;
  double magnitude = 0.0;
  bool positive = true;
  if (p == 1.0 || p == 0.0) {
    magnitude = tail_quantile(uniform_open(eng));
    positive = p == 1.0;
  } else {
    const double u_sign = uniform_open(eng);
    magnitude = tail_quantile(uniform_open(eng));
    positive = u_sign < p;
  }
  return (positive ? magnitude : -magnitude) - shift_;
}

void InnovationSampler::fill(Engine& eng, double* out, std::size_t count) const {
  for (std::size_t i = 0; i < count; ++i) out[i] = draw(eng);
}

std::vector<double> sample_innovations(const TailModel& model, std::size_t count,
                                       std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be at least 1");
  const InnovationSampler sampler(model);
  Engine eng = make_engine(seed);
  std::vector<double> out(count);
  sampler.fill(eng, out.data(), count);
  return out;
}

namespace {

double norming_from(const InnovationSampler& sampler, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("norming constant requires n >= 1");
  const double nd = static_cast<double>(n);
  const double a = sampler.tail_quantile(1.0 / nd);
  if (std::abs(nd * sampler.survival(a) - 1.0) > NormingTable::tolerance) {
    throw NumericalFault("norming constant root not resolved to tolerance for n = " +
                         std::to_string(n));
  }
  return a;
}

}  // namespace

double norming_constant(const TailModel& model, std::uint64_t n) {
  return norming_from(InnovationSampler(model), n);
}

NormingTable::NormingTable(TailModel model) : sampler_(model) {}

double NormingTable::at(std::uint64_t n) {
  if (auto it = entries_.find(n); it != entries_.end()) return it->second;
  const double a = norming_from(sampler_, n);
  entries_.emplace(n, a);
  return a;
}

bool NormingTable::consistent() const {
  double prev = 0.0;
  for (const auto& [n, a] : entries_) {
    if (!(a > 0.0) || a < prev) return false;
    if (std::abs(static_cast<double>(n) * sampler_.survival(a) - 1.0) > tolerance) return false;
    prev = a;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Stable reference law

StableParameters stable_parameters(double alpha, double p, double q) {
  TailModel probe;
  probe.alpha = alpha;
  probe.p = p;
  probe.q = q;
  probe.validate();
  if (alpha == 1.0) return {1.0, 0.0, kPi / 2.0};
  const double scale_pow = std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0);
  return {alpha, p - q, std::pow(scale_pow, 1.0 / alpha)};
}

std::complex<double> stable_closed_form_chf(const StableParameters& sp, double theta) {
  const double at = std::abs(theta);
  if (sp.alpha == 1.0) return std::exp(std::complex<double>(-sp.scale * at, 0.0));
  const double mag = std::pow(sp.scale * at, sp.alpha);
  const double sgn = theta > 0 ? 1.0 : (theta < 0 ? -1.0 : 0.0);
  const double phase = sp.skew * sgn * std::tan(kPi * sp.alpha / 2.0);
  return std::exp(std::complex<double>(-mag, mag * phase));
}

double stable_draw(const StableParameters& sp, Engine& eng) {
  const double v = kPi * (uniform_open(eng) - 0.5);
  const double w = standard_exponential(eng);
  if (sp.alpha == 1.0) return sp.scale * std::tan(v);
  const double a = sp.alpha;
  const double t = sp.skew * std::tan(kPi * a / 2.0);
  const double b = std::atan(t) / a;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
  const double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
  return sp.scale * x;
}

std::vector<double> stable_oracle_sample(double alpha, double p, double q, std::size_t count,
                                         std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be at least 1");
  const StableParameters sp = stable_parameters(alpha, p, q);
  Engine eng = make_engine(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = stable_draw(sp, eng);
  return out;
}

namespace {

// int_0^inf (e^{i theta x} - 1 - i theta x 1{alpha>1}) alpha x^{-1-alpha} dx, theta > 0.
// The imaginary part is skipped for alpha = 1 (it cancels in the symmetric law).
std::complex<double> levy_integral_positive(double alpha, double theta) {
  const bool compensated = alpha > 1.0;
  const bool want_imag = alpha != 1.0;

  auto real_part = [&](double x) {
    const double tx = theta * x;
    if (tx < 1e-4) return -alpha * theta * theta * std::pow(x, 1.0 - alpha) / 2.0 * (1.0 - tx * tx / 12.0);
    const double s = std::sin(tx / 2.0);
    return -2.0 * s * s * alpha * std::pow(x, -1.0 - alpha);
  };
  auto imag_part = [&](double x) {
    const double tx = theta * x;
    if (compensated) {
      if (tx < 1e-3) {
        return -alpha * theta * theta * theta * std::pow(x, 2.0 - alpha) / 6.0 * (1.0 - tx * tx / 20.0);
      }
      return (std::sin(tx) - tx) * alpha * std::pow(x, -1.0 - alpha);
    }
    if (tx < 1e-4) return alpha * theta * std::pow(x, -alpha) * (1.0 - tx * tx / 6.0);
    return std::sin(tx) * alpha * std::pow(x, -1.0 - alpha);
  };

  constexpr int periods = 256;
  const double period = 2.0 * kPi / theta;
  const double upper = periods * period;

  boost::math::quadrature::tanh_sinh<double> ts;
  double re = 0.0, im = 0.0, err = 0.0, l1 = 0.0;
  re = ts.integrate(real_part, 0.0, period, 1e-13, &err, &l1);
  if (!std::isfinite(re) || err > 1e-8 * std::max(1.0, l1)) {
    throw NumericalFault("chf quadrature did not converge near the origin");
  }
  if (want_imag) {
    im = ts.integrate(imag_part, 0.0, period, 1e-13, &err, &l1);
    if (!std::isfinite(im) || err > 1e-8 * std::max(1.0, l1)) {
      throw NumericalFault("chf quadrature did not converge near the origin");
    }
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (int k = 1; k < periods; ++k) {
    const double a = k * period;
    const double b = a + period;
    re += GK::integrate(real_part, a, b, 5, 1e-12);
    if (want_imag) im += GK::integrate(imag_part, a, b, 5, 1e-12);
  }
  // Asymptotic tails past `upper` (sin(theta upper) = 0, cos(theta upper) = 1).
  re += -std::pow(upper, -alpha) + alpha * (1.0 + alpha) * std::pow(upper, -2.0 - alpha) / (theta * theta);
  if (want_imag) {
    im += alpha * std::pow(upper, -1.0 - alpha) / theta;
    if (compensated) im -= theta * alpha * std::pow(upper, 1.0 - alpha) / (alpha - 1.0);
  }
  if (!std::isfinite(re) || !std::isfinite(im)) throw NumericalFault("chf quadrature produced a non-finite value");
  return {re, im};
}

}  // namespace

std::complex<double> stable_oracle_chf(double alpha, double p, double q, double theta) {
  TailModel probe;
  probe.alpha = alpha;
  probe.p = p;
  probe.q = q;
  probe.validate();
  if (theta == 0.0) return {1.0, 0.0};
  const std::complex<double> forward = levy_integral_positive(alpha, std::abs(theta));
  const std::complex<double> backward = std::conj(forward);
  const std::complex<double> exponent =
      theta > 0 ? p * forward + q * backward : p * backward + q * forward;
  if (alpha == 1.0) return std::exp(std::complex<double>(exponent.real(), 0.0));
  return std::exp(exponent);
}

}  // namespace heavylin
