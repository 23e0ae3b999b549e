#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "heavylin/coefficients.hpp"
#include "heavylin/error.hpp"
#include "oracles.hpp"

using namespace heavylin;

TEST_CASE("coefficient lookup") {
  const auto c = CoefficientSeq::finite_support(0, {1.0, -1.0});
  CHECK(c.coeff(0) == 1.0);
  CHECK(c.coeff(1) == -1.0);
  CHECK(c.coeff(5) == 0.0);
  CHECK(c.coeff(-7) == 0.0);
  const auto pl = CoefficientSeq::power_log(0.6, 0.5, 10000);
  CHECK(pl.coeff(3) == doctest::Approx(std::pow(3.0, -1.0 / 0.6) * std::pow(std::log(3.0), -1.5 / 0.6)).epsilon(1e-15));
  CHECK(pl.coeff(-3) == pl.coeff(3));
  CHECK(pl.coeff(2) == 0.0);
  CHECK(pl.coeff(10001) == 0.0);
  const auto alt = CoefficientSeq::power_log(0.6, 0.5, 100, SignSpec::parse("alternating"));
  CHECK(alt.coeff(3) * alt.coeff(4) < 0.0);
  const auto mask = CoefficientSeq::power_log(0.6, 0.5, 100, SignSpec::parse("+--"));
  CHECK(mask.coeff(3) > 0.0);
  CHECK(mask.coeff(4) < 0.0);
  CHECK(mask.coeff(5) < 0.0);
  CHECK(SignSpec::parse("+-").to_string() == "+-");
  CHECK_THROWS_AS(SignSpec::parse("+x"), InvalidArgument);
}

TEST_CASE("d coefficient examples") {
  const auto c = CoefficientSeq::finite_support(0, {1.0, -1.0});
  CHECK(c.d(10, 0) == -1.0);
  CHECK(c.d(10, 1) == 0.0);
  const auto z = CoefficientSeq::finite_support(0, {2.0, -1.0});
  for (std::int64_t n : {2, 5, 100}) CHECK(z.d(n, 1) == 1.0);
}

TEST_CASE("telescoping identity against direct summation") {
  gen::Gen g(101);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto seq = g.finite_seq();
    const std::vector<double> vals(seq.values().begin(), seq.values().end());
    const std::int64_t n = g.integer(1, 40);
    const std::int64_t j = g.integer(-20, 60);
    CHECK(seq.d(n, j) == doctest::Approx(oracle::d_bruteforce(vals, seq.lo(), n, j)).epsilon(1e-12).scale(1.0));
    CHECK(seq.d(n, j) == doctest::Approx(seq.prefix(n - j) - seq.prefix(-j)).epsilon(1e-12).scale(1.0));
    // Windows missing the support give an exact zero.
    if (n - j < seq.lo() || 1 - j > seq.hi()) CHECK(seq.d(n, j) == 0.0);
  }
  const auto pl = CoefficientSeq::power_log(0.6, 0.5, 500, SignSpec::parse("+-+"));
  for (int rep = 0; rep < 200; ++rep) {
    const std::int64_t n = g.integer(1, 800);
    const std::int64_t j = g.integer(-900, 900);
    double direct = 0.0;
    for (std::int64_t k = 1 - j; k <= n - j; ++k) direct += pl.coeff(k);
    CHECK(pl.d(n, j) == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("d approaches A with an explicit remainder bound") {
  const auto pl = CoefficientSeq::power_log(0.8, 0.5, 2000, SignSpec::parse("alternating"));
  const auto agg = pl.aggregates();
  for (std::int64_t j : {-5, 0, 3, 50}) {
    double prev_bound = INFINITY;
    for (std::int64_t n : {10, 100, 1000, 5000}) {
      double outside = 0.0;
      for (std::int64_t k = pl.lo(); k <= pl.hi(); ++k)
        if (k < 1 - j || k > n - j) outside += std::abs(pl.coeff(k));
      const double bound = outside + agg.tail_bound;
      CHECK(std::abs(pl.d(n, j) - agg.A) <= bound + 1e-12);
      CHECK(bound <= prev_bound);
      prev_bound = bound;
    }
  }
}

TEST_CASE("aggregates") {
  auto a = CoefficientSeq::finite_support(0, {1.0, -1.0}).aggregates();
  CHECK(a.A == 0.0);
  CHECK(a.A_plus == 1.0);
  CHECK(a.A_minus == 1.0);
  CHECK(a.A_abs == 2.0);
  a = CoefficientSeq::finite_support(0, {2.0, 1.0}).aggregates();
  CHECK(a.A == 3.0);
  CHECK(a.A_plus == 3.0);
  CHECK(a.A_minus == 0.0);
  CHECK(a.A_abs == 3.0);

  const auto pl = CoefficientSeq::power_log(0.6, 0.5, 10000);
  double direct = 0.0;
  for (std::int64_t j = -10000; j <= 10000; ++j) direct += std::abs(pl.coeff(j));
  const auto agg = pl.aggregates();
  CHECK(agg.A == doctest::Approx(direct).epsilon(1e-12));
  CHECK(agg.A == doctest::Approx(agg.A_abs).epsilon(1e-12));
  CHECK(agg.A == pl.aggregates().A);

  gen::Gen g(7);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto s1 = g.finite_seq();
    const auto s2 = g.finite_seq();
    const auto x = s1.aggregates();
    CHECK(x.A == doctest::Approx(x.A_plus - x.A_minus).epsilon(1e-12).scale(1.0));
    CHECK(x.A_abs == doctest::Approx(x.A_plus + x.A_minus).epsilon(1e-12).scale(1.0));
    CHECK(x.A_plus >= 0.0);
    CHECK(x.A_minus >= 0.0);
    const auto sum = s1 + s2;
    CHECK(sum.aggregates().A == doctest::Approx(x.A + s2.aggregates().A).epsilon(1e-12).scale(1.0));
    for (std::int64_t j = -10; j <= 10; ++j) CHECK(sum.coeff(j) == doctest::Approx(s1.coeff(j) + s2.coeff(j)));
  }
}

TEST_CASE("sign parts") {
  const auto s = CoefficientSeq::finite_support(-1, {0.5, -2.0, 3.0});
  const auto p = s.positive_part(), m = s.negative_part(), ab = s.absolute();
  for (std::int64_t j = -2; j <= 3; ++j) {
    CHECK(p.coeff(j) - m.coeff(j) == s.coeff(j));
    CHECK(p.coeff(j) + m.coeff(j) == ab.coeff(j));
    CHECK(p.coeff(j) >= 0.0);
    CHECK(m.coeff(j) >= 0.0);
  }
  CHECK(s.scaled(-2.0).coeff(1) == -6.0);
}

TEST_CASE("three series sum") {
  TailModel m;
  m.alpha = 0.5;
  m.p = 1.0;
  m.q = 0.0;
  const auto geo = three_series_sum(CoefficientSeq::geometric(0.5, 60), m);
  const double r = std::pow(2.0, -0.5);
  CHECK(geo.finite());
  const double exact = 1.0 + 2.0 * r / (1.0 - r);
  CHECK(geo.partial == doctest::Approx(exact - 2.0 * std::pow(r, 61.0) / (1.0 - r)).epsilon(1e-13));
  CHECK(geo.upper() >= exact);
  CHECK(geo.upper() == doctest::Approx(exact).epsilon(1e-8));
  CHECK(geo.upper() == doctest::Approx(5.8284).epsilon(1e-4));

  m.alpha = 1.0;
  m.p = m.q = 0.5;
  const auto harmonic = three_series_sum(CoefficientSeq::power(1.0, 10000), m);
  CHECK(harmonic.divergent);
  CHECK_FALSE(harmonic.finite());

  m.alpha = 0.6;
  const auto w4 = three_series_sum(CoefficientSeq::power_log(0.6, 0.5, 10000), m);
  const auto w5 = three_series_sum(CoefficientSeq::power_log(0.6, 0.5, 100000), m);
  REQUIRE(w4.finite());
  REQUIRE(w5.finite());
  CHECK(w4.upper() == doctest::Approx(w5.upper()).epsilon(0.01));
  CHECK(w5.partial > w4.partial);
  CHECK(w5.partial < w4.upper());

  const auto empty = three_series_sum(CoefficientSeq(), m);
  CHECK(empty.partial == 0.0);
  CHECK(empty.finite());
}

TEST_CASE("power series divergence classification") {
  TailShape s;
  s.power = 1.0 / 0.6;
  s.log_power = 1.5 / 0.6;
  CHECK_FALSE(power_series_diverges(s, 0.6, 0.0));
  CHECK(power_series_diverges(s, 0.5, 0.0));
  CHECK(power_series_diverges(s, 0.6, 1.5));
}
