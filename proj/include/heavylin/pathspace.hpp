#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "heavylin/linproc.hpp"

namespace heavylin {

/// Distance from b to the closed interval with endpoints a and c.
double h_distance(double a, double b, double c) noexcept;

/// Grid half-window floor(delta n) used by w_m1.
std::int64_t m1_window(std::int64_t n, double delta);

/// M1 oscillation modulus sup H(x(t1), x(t2), x(t3)) over grid triples with
/// t2 - delta <= t1 < t2 < t3 <= t2 + delta. O(n) via running extrema.
double w_m1(const CadlagPath& path, double delta);
/// Same quantity by direct enumeration of triples, O(n w^2).
double w_m1_bruteforce(const CadlagPath& path, double delta);

/// Largest H over grid triples inside [s, t].
double max_h_on_interval(const CadlagPath& path, double s, double t);

/// Number of eta-oscillations of the path on [s, t].
std::int64_t count_eta_oscillations(const CadlagPath& path, double eta, double s = 0.0, double t = 1.0);

double sup_norm(const CadlagPath& path);

class ScalarFunction {
 public:
  enum class Kind { identity, abs_power, table };

  static ScalarFunction identity();
  static ScalarFunction abs_power(double beta);
  /// Piecewise linear through (xs[i], ys[i]), constant beyond the ends.
  static ScalarFunction table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_ = Kind::identity;
  double beta_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// int_0^t g(x(s)) ds, exact for step paths.
double smoothing_functional(const CadlagPath& path, const ScalarFunction& g, double t);

/// int_0^1 |S(t) - A Z(t)|^beta dt.
double lbeta_discrepancy(const CadlagPath& path_s, const CadlagPath& path_z, double A, double beta);

struct ModulusReport {
  double sup_norm = 0.0;
  std::vector<std::pair<double, double>> w_m1;
  std::vector<std::pair<double, std::int64_t>> n_eta;
};

ModulusReport modulus_report(const CadlagPath& path, const std::vector<double>& deltas,
                             const std::vector<double>& etas);
std::string to_json(const ModulusReport& report);

}  // namespace heavylin
