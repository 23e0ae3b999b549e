#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "heavylin/commands.hpp"
#include "heavylin/conditions.hpp"
#include "heavylin/config.hpp"
#include "heavylin/error.hpp"
#include "heavylin/presets.hpp"

using namespace heavylin;

namespace {

const char* kBasic = R"(# comment
[model]
alpha = 0.5
p = 1
q = 0
h.kind = constant
h.params = 1
seed = 42

[coefficients]
kind = finite_support
offset = 0
values = 1, -1

[experiment]
n = 100
reps = 50
n_list = 100, 1000, 10000
)";

int error_line(const std::string& text) {
  try {
    Config::parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config parsing and typed views") {
  const Config c = Config::parse(kBasic);
  const TailModel m = c.model();
  CHECK(m.alpha == 0.5);
  CHECK(m.p == 1.0);
  CHECK(m.h.kind() == SlowlyVarying::Kind::constant);
  CHECK(c.seed() == 42);
  const auto seq = c.coefficients();
  CHECK(seq.coeff(0) == 1.0);
  CHECK(seq.coeff(1) == -1.0);
  const auto e = c.experiment();
  CHECK(e.n == 100);
  CHECK(e.reps == 50);
  CHECK(e.base_seed == 42);
  CHECK(c.check_settings().n_list == std::vector<std::int64_t>{100, 1000, 10000});
  CHECK(Config::parse("[model]\nalpha = 0.9\n").seed() == 1);
}

TEST_CASE("config diagnostics carry line numbers") {
  CHECK(error_line("[model]\nalpha = 0.5\n[bogus]\n") == 3);
  CHECK(error_line("[model]\nalpha = 0.5\n\nwhat = 1\n") == 4);
  CHECK(error_line("alpha = 1\n") == 1);
  try {
    Config::parse("[model]\nalpha = x\n");
    FAIL("expected a config error");
  } catch (const ConfigError& err) {
    CHECK(err.line() == 2);
  }
  CHECK(error_line("[experiment]\n\nn = 0\n") == 3);
  CHECK_THROWS_AS(Config::parse("[model]\nh.kind = weird\n").model(), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.ini"), Error);
  CHECK_THROWS_AS(Config::parse("[coefficients]\nkind = power_log\n").coefficients(), ConfigError);
}

TEST_CASE("resolved text round trips") {
  Config c = Config::parse(kBasic);
  c.set("experiment", "reps", "75");
  CHECK_THROWS_AS(c.set("experiment", "unknown", "1"), ConfigError);
  const std::string text = c.resolved_text();
  const Config again = Config::parse(text);
  CHECK(again.resolved_text() == text);
  CHECK(again.experiment().reps == 75);
  CHECK(again.get("model", "alpha").value() == "0.5");
  c.erase("experiment", "reps");
  CHECK_FALSE(c.get("experiment", "reps").has_value());
}

TEST_CASE("presets") {
  const auto names = preset_names();
  for (const char* want : {"intro_cancel", "example_41", "example_52"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  for (const auto& name : names) {
    const Config c = preset_config(name);
    CHECK_NOTHROW(c.model().validate());
    CHECK_NOTHROW(c.experiment().validate());
  }
  const auto intro = preset_config("intro_cancel");
  CHECK(intro.coefficients().aggregates().A == 0.0);
  CHECK(intro.model().alpha == 0.7);
  const auto ex52 = preset_config("example_52").experiment();
  CHECK(ex52.zeta.value() == 2.0);
  CHECK(ex52.xi.value() == 1.0);
  CHECK(preset_config("example_41").coefficients().kind() == CoefficientSeq::Kind::power_log);
  CHECK_THROWS_AS(preset_text("nope"), ConfigError);
}

TEST_CASE("check command") {
  const auto r = cmd_check(Config::parse(kBasic));
  CHECK(r.passed);
  const auto& cond = r.report["condition"];
  CHECK(cond["left_sum"][0].get<double>() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(cond["left_sum"][2].get<double>() == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(cond["right_sum"][1].get<double>() == 0.0);
  CHECK(r.report["command"] == "check");
  CHECK(r.report.contains("corollaries"));
  REQUIRE(!r.artifacts.empty());

  // The command is a thin wrapper: values equal the library evaluation.
  const Config ex = preset_config("example_41");
  const auto rep = cmd_check(ex);
  const auto lib = fdd_condition_trend(ex.coefficients(), ex.model(), ex.check_settings().n_list);
  for (std::size_t i = 0; i < lib.left.size(); ++i) {
    CHECK(rep.report["condition"]["left_sum"][i].get<double>() == lib.left[i]);
    CHECK(rep.report["condition"]["right_sum"][i].get<double>() == lib.right[i]);
  }

  const auto empty = cmd_check(Config::parse("[model]\nalpha = 0.8\n[coefficients]\nkind = finite_support\nvalues = 0\n"));
  for (const auto& v : empty.report["condition"]["left_sum"]) CHECK(v.get<double>() == 0.0);
  for (const auto& v : empty.report["condition"]["right_sum"]) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("simulate command") {
  Config c = Config::parse(kBasic);
  c.set("coefficients", "values", "2.5");
  const auto a = cmd_simulate(c);
  const auto b = cmd_simulate(c);
  REQUIRE(a.artifacts.size() == 4);
  CHECK(a.artifacts == b.artifacts);
  const auto rows = [](const std::string& csv) {
    std::vector<double> v;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) v.push_back(std::stod(line.substr(line.find(',') + 1)));
    return v;
  };
  const auto s = rows(a.artifacts[0].second);
  const auto z = rows(a.artifacts[1].second);
  CHECK(a.artifacts[0].first == "S_n.csv");
  CHECK(a.artifacts[1].first == "Z_n.csv");
  REQUIRE(s.size() == 101);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(2.5 * z[i]).epsilon(1e-14));
  c.set("model", "seed", "43");
  CHECK(cmd_simulate(c).artifacts != a.artifacts);
}

TEST_CASE("experiment command") {
  Config c = Config::parse(kBasic);
  c.set("model", "alpha", "0.7");
  c.set("experiment", "n", "200");
  c.set("experiment", "reps", "100");
  const auto r = cmd_experiment("frechet", c, 2);
  CHECK(r.report["kind"] == "frechet");
  CHECK(r.report["results"].contains("ks"));
  CHECK(r.report["results"].contains("reference_points"));
  CHECK(r.report["failures"].is_array());
  CHECK(cmd_experiment("frechet", c, 1).report.dump() == r.report.dump());
  CHECK_THROWS_AS(cmd_experiment("nope", c), InvalidArgument);
}
