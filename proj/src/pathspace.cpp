#include "heavylin/pathspace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>

#include <json.hpp>

#include "heavylin/error.hpp"
#include "heavylin/numeric.hpp"

namespace heavylin {

double h_distance(double a, double b, double c) noexcept {
  const double lo = std::min(a, c);
  const double hi = std::max(a, c);
  return std::max({0.0, lo - b, b - hi});
}

namespace {

std::int64_t grid_floor(std::int64_t n, double t) {
  const double x = t * static_cast<double>(n);
  const double r = std::round(x);
  const double k = std::abs(x - r) < 1e-9 ? r : std::floor(x);
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(k), 0, n);
}

// out[i] = extremum of v over [i - w + 1, i] (clipped at 0).
template <class Better>
std::vector<double> trailing_extremum(const std::vector<double>& v, std::int64_t w, Better better) {
  std::vector<double> out(v.size());
  std::deque<std::size_t> dq;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (!dq.empty() && !better(v[dq.back()], v[i])) dq.pop_back();
    dq.push_back(i);
    if (static_cast<std::int64_t>(dq.front()) <= static_cast<std::int64_t>(i) - w) dq.pop_front();
    out[i] = v[dq.front()];
  }
  return out;
}

}  // namespace

std::int64_t m1_window(std::int64_t n, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  return static_cast<std::int64_t>(std::floor(delta * static_cast<double>(n) + 1e-9));
}

double w_m1(const CadlagPath& path, double delta) {
  const std::int64_t w = m1_window(path.n, delta);
  if (w < 1) return 0.0;
  const std::vector<double>& v = path.values;
  std::vector<double> rev(v.rbegin(), v.rend());
  auto gt = [](double a, double b) { return a > b; };
  auto lt = [](double a, double b) { return a < b; };
  const auto left_max = trailing_extremum(v, w, gt);
  const auto left_min = trailing_extremum(v, w, lt);
  const auto right_max = trailing_extremum(rev, w, gt);
  const auto right_min = trailing_extremum(rev, w, lt);
  const std::size_t last = v.size() - 1;
  double best = 0.0;
  for (std::size_t k = 1; k < last; ++k) {
    const double b = v[k];
    const double max_l = left_max[k - 1], min_l = left_min[k - 1];
    const double max_r = right_max[last - (k + 1)], min_r = right_min[last - (k + 1)];
    best = std::max({best, std::min(max_l, max_r) - b, b - std::max(min_l, min_r)});
  }
  return best;
}

double w_m1_bruteforce(const CadlagPath& path, double delta) {
  const std::int64_t w = m1_window(path.n, delta);
  double best = 0.0;
  for (std::int64_t k = 1; k < path.n; ++k) {
    for (std::int64_t i = std::max<std::int64_t>(0, k - w); i < k; ++i) {
      for (std::int64_t l = k + 1; l <= std::min(path.n, k + w); ++l) {
        best = std::max(best, h_distance(path.at(i), path.at(k), path.at(l)));
      }
    }
  }
  return best;
}

double max_h_on_interval(const CadlagPath& path, double s, double t) {
  if (!(0.0 <= s && s <= t && t <= 1.0)) throw InvalidArgument("need 0 <= s <= t <= 1");
  const std::int64_t a = grid_floor(path.n, s);
  const std::int64_t b = grid_floor(path.n, t);
  if (b - a < 2) return 0.0;
  const auto len = static_cast<std::size_t>(b - a + 1);
  std::vector<double> pre_max(len), pre_min(len), suf_max(len), suf_min(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double x = path.at(a + static_cast<std::int64_t>(i));
    pre_max[i] = i ? std::max(pre_max[i - 1], x) : x;
    pre_min[i] = i ? std::min(pre_min[i - 1], x) : x;
  }
  for (std::size_t r = 0; r < len; ++r) {
    const std::size_t i = len - 1 - r;
    const double x = path.at(a + static_cast<std::int64_t>(i));
    suf_max[i] = r ? std::max(suf_max[i + 1], x) : x;
    suf_min[i] = r ? std::min(suf_min[i + 1], x) : x;
  }
  double best = 0.0;
  for (std::size_t k = 1; k + 1 < len; ++k) {
    const double x = path.at(a + static_cast<std::int64_t>(k));
    best = std::max({best, std::min(pre_max[k - 1], suf_max[k + 1]) - x,
                     x - std::max(pre_min[k - 1], suf_min[k + 1])});
  }
  return best;
}

std::int64_t count_eta_oscillations(const CadlagPath& path, double eta, double s, double t) {
  if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
  if (!(0.0 <= s && s < t && t <= 1.0)) throw InvalidArgument("need 0 <= s < t <= 1");
  const std::int64_t a = grid_floor(path.n, s);
  const std::int64_t b = grid_floor(path.n, t);
  std::int64_t count = 0;
  double lo = path.at(a), hi = lo;
  for (std::int64_t k = a + 1; k <= b; ++k) {
    const double x = path.at(k);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    if (hi - lo > eta) {
      ++count;
      lo = hi = x;
    }
  }
  return count;
}

double sup_norm(const CadlagPath& path) {
  double m = 0.0;
  for (double x : path.values) m = std::max(m, std::abs(x));
  return m;
}

ScalarFunction ScalarFunction::identity() { return ScalarFunction(); }

ScalarFunction ScalarFunction::abs_power(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("abs_power exponent must be positive");
  ScalarFunction f;
  f.kind_ = Kind::abs_power;
  f.beta_ = beta;
  return f;
}

ScalarFunction ScalarFunction::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || xs.size() != ys.size()) throw InvalidArgument("table needs matching nonempty x and y");
  if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw InvalidArgument("table abscissae must be strictly increasing");
  }
  ScalarFunction f;
  f.kind_ = Kind::table;
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

double ScalarFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::abs_power:
      return beta_ == 1.0 ? std::abs(x) : std::pow(std::abs(x), beta_);
    case Kind::table: {
      if (x <= xs_.front()) return ys_.front();
      if (x >= xs_.back()) return ys_.back();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
      const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return ys_[i - 1] + w * (ys_[i] - ys_[i - 1]);
    }
  }
  return x;
}

double smoothing_functional(const CadlagPath& path, const ScalarFunction& g, double t) {
  if (!(0.0 <= t && t <= 1.0)) throw InvalidArgument("t must lie in [0, 1]");
  const std::int64_t k_end = grid_floor(path.n, t);
  const double step = 1.0 / static_cast<double>(path.n);
  CompensatedSum acc;
  for (std::int64_t k = 0; k < k_end; ++k) acc += g(path.at(k));
  double total = acc.value() * step;
  const double rest = t - static_cast<double>(k_end) * step;
  if (k_end < path.n && rest > 0.0) total += g(path.at(k_end)) * rest;
  return total;
}

double lbeta_discrepancy(const CadlagPath& path_s, const CadlagPath& path_z, double A, double beta) {
  if (path_s.n != path_z.n) throw InvalidArgument("grid resolution mismatch");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  CompensatedSum acc;
  for (std::int64_t k = 0; k < path_s.n; ++k) {
    const double diff = std::abs(path_s.at(k) - A * path_z.at(k));
    acc += beta == 1.0 ? diff : std::pow(diff, beta);
  }
  return acc.value() / static_cast<double>(path_s.n);
}

ModulusReport modulus_report(const CadlagPath& path, const std::vector<double>& deltas,
                             const std::vector<double>& etas) {
  ModulusReport r;
  r.sup_norm = sup_norm(path);
  for (double d : deltas) r.w_m1.emplace_back(d, w_m1(path, d));
  for (double e : etas) r.n_eta.emplace_back(e, count_eta_oscillations(path, e));
  return r;
}

namespace {

std::string key(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_json(const ModulusReport& report) {
  nlohmann::ordered_json j;
  j["sup_norm"] = report.sup_norm;
  j["w_m1"] = nlohmann::ordered_json::object();
  for (const auto& [d, v] : report.w_m1) j["w_m1"][key(d)] = v;
  j["n_eta"] = nlohmann::ordered_json::object();
  for (const auto& [e, c] : report.n_eta) j["n_eta"][key(e)] = c;
  return j.dump();
}

}  // namespace heavylin
