#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heavylin/rng.hpp"

namespace heavylin {

/// Slowly varying factor h of the innovation tail P(|Y| > x) = x^{-alpha} h(x).
///
/// Catalog:
///   constant(C):          h(x) = C
///   log_power(rho, C):    h(x) = C * log(e + x)^rho
///   karamata(c, gamma0):  h(x) = c * exp( int_1^{max(x,1)} eps(u)/u du ),
///                         eps(u) = gamma0 / log(e + u)
/// The karamata member grows like (log x)^gamma0.
class SlowlyVarying {
 public:
  enum class Kind { constant, log_power, karamata };

  static SlowlyVarying constant(double c = 1.0);
  static SlowlyVarying log_power(double rho, double c = 1.0);
  static SlowlyVarying karamata(double c_limit, double gamma0);

  double operator()(double x) const;
  /// log h(e^{log_x}), usable far beyond the double range of x.
  double log_at(double log_x) const;
  /// x h'(x) / h(x), the local index used by the tail inversion.
  double log_derivative(double x) const;

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  /// rho for log_power, gamma0 for karamata, 0 for constant.
  double shape() const noexcept { return shape_; }
  /// Exponent q such that h(x) behaves like (log x)^q at infinity.
  double log_index() const noexcept { return kind_ == Kind::constant ? 0.0 : shape_; }
  /// M with h(lambda x)/h(x) <= M for all lambda >= 1, x > 0, if one exists.
  std::optional<double> bounded_ratio_constant() const;

  std::string kind_name() const;
  std::vector<double> params() const;
  static SlowlyVarying from_spec(const std::string& kind, const std::vector<double>& params);

 private:
  struct KaramataTable;
  SlowlyVarying(Kind k, double scale, double shape);

  Kind kind_ = Kind::constant;
  double scale_ = 1.0;
  double shape_ = 0.0;
  std::shared_ptr<const KaramataTable> table_;
};

/// Innovation law: |Y| has survival min(1, x^{-alpha} h(x)); the sign is +
/// with probability p and - with probability q. With `centered` set and
/// alpha > 1 the exact mean is subtracted.
struct TailModel {
  double alpha = 1.5;
  double p = 0.5;
  double q = 0.5;
  SlowlyVarying h = SlowlyVarying::constant(1.0);
  bool centered = true;

  /// Throws InvalidArgument unless alpha in (0,2), p,q in [0,1], p+q = 1,
  /// and p = q = 1/2 when alpha = 1.
  void validate() const;
  /// x^{-alpha} h(x).
  double tail(double x) const { return std::pow(x, -alpha) * h(x); }
  bool is_pure_pareto() const {
    return h.kind() == SlowlyVarying::Kind::constant && h.scale() == 1.0;
  }
};

/// Precomputed inversion data for one TailModel. Cheap to copy, immutable.
class InnovationSampler {
 public:
  explicit InnovationSampler(const TailModel& model);

  const TailModel& model() const noexcept { return model_; }
  /// Left end of the support of |Y|: the point where the tail reaches 1.
  double support_min() const noexcept { return x_min_; }
  /// E[Y] before centering.
  double raw_mean() const noexcept { return raw_mean_; }
  /// Value subtracted from every draw (0 unless centered and alpha > 1).
  double shift() const noexcept { return shift_; }

  /// P(|Y_raw| > x) = min(1, tail(x)).
  double survival(double x) const;
  /// Smallest x with survival(x) <= u, u in (0, 1].
  double tail_quantile(double u) const;

  double draw(Engine& eng) const;
  void fill(Engine& eng, double* out, std::size_t count) const;

 private:
  TailModel model_;
  double x_min_ = 1.0;
  double raw_mean_ = 0.0;
  double shift_ = 0.0;
};

std::vector<double> sample_innovations(const TailModel& model, std::size_t count,
                                       std::uint64_t seed);

/// a_n with n * P(|Y| > a_n) = 1 (C = 1 convention).
double norming_constant(const TailModel& model, std::uint64_t n);

class NormingTable {
 public:
  static constexpr double tolerance = 1e-6;

  explicit NormingTable(TailModel model);
  /// Computes and caches a_n.
  double at(std::uint64_t n);
  const std::map<std::uint64_t, double>& entries() const noexcept { return entries_; }
  /// True when every stored entry satisfies |n P(|Y|>a_n) - 1| <= tolerance
  /// and the entries are nondecreasing in n.
  bool consistent() const;

 private:
  InnovationSampler sampler_;
  std::map<std::uint64_t, double> entries_;
};

/// Strictly alpha-stable law in the parameterisation
///   log E exp(i theta Z) = -scale^alpha |theta|^alpha (1 - i skew sgn(theta) tan(pi alpha/2))
/// (alpha != 1), or the Cauchy law with the given scale (alpha = 1).
struct StableParameters {
  double alpha;
  double skew;
  double scale;
};

/// Parameters of the limit law whose Levy density is
/// (p 1{x>0} + q 1{x<0}) alpha |x|^{-1-alpha}.
StableParameters stable_parameters(double alpha, double p, double q);

std::complex<double> stable_closed_form_chf(const StableParameters& params, double theta);

/// Chambers-Mallows-Stuck draws from the limit law.
std::vector<double> stable_oracle_sample(double alpha, double p, double q, std::size_t count,
                                         std::uint64_t seed);
double stable_draw(const StableParameters& params, Engine& eng);

/// Characteristic function of the limit law, by quadrature of the
/// Levy-Khintchine integrand (compensated for alpha > 1).
std::complex<double> stable_oracle_chf(double alpha, double p, double q, double theta);

}  // namespace heavylin
