#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "heavylin/heavylin.h"

TEST_CASE("version and presets") {
  CHECK(std::strlen(hl_version()) > 0);
  CHECK(hl_preset_count() >= 3);
  std::vector<std::string> names;
  for (size_t i = 0; i < hl_preset_count(); ++i) names.emplace_back(hl_preset_name(i));
  CHECK(std::find(names.begin(), names.end(), "example_52") != names.end());
  CHECK(hl_preset_name(hl_preset_count()) == nullptr);
}

TEST_CASE("config handles and errors") {
  hl_config* cfg = nullptr;
  CHECK(hl_config_load_text("[model]\nalpha = 0.6\n[nope]\n", &cfg) == HL_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(hl_last_error()).find("line 3") != std::string::npos);
  CHECK(hl_config_from_preset("missing", &cfg) == HL_ERR_CONFIG);
  CHECK(hl_config_load_file("/does/not/exist.ini", &cfg) == HL_ERR_IO);
  CHECK(hl_config_load_text(nullptr, &cfg) == HL_ERR_INVALID_ARGUMENT);
  CHECK(hl_config_load_text("[model]\n", nullptr) == HL_ERR_INVALID_ARGUMENT);

  REQUIRE(hl_config_from_preset("intro_cancel", &cfg) == HL_OK);
  CHECK(hl_config_set(cfg, "experiment", "n", "100") == HL_OK);
  CHECK(std::string(hl_config_text(cfg)).find("n = 100") != std::string::npos);
  CHECK(hl_config_set(cfg, "experiment", "bogus", "1") == HL_ERR_CONFIG);
  CHECK(hl_config_set(cfg, "model", "alpha", "abc") == HL_ERR_CONFIG);
  hl_config_free(cfg);
  hl_config_free(nullptr);
}

TEST_CASE("check, simulate and experiment runs") {
  hl_config* cfg = nullptr;
  REQUIRE(hl_config_from_preset("intro_cancel", &cfg) == HL_OK);
  hl_result* res = nullptr;
  REQUIRE(hl_run_check(cfg, &res) == HL_OK);
  const auto check = nlohmann::json::parse(hl_result_json(res));
  CHECK(check["condition"]["left_sum"][0].get<double>() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(hl_result_passed(res) == 1);
  CHECK(std::strlen(hl_result_table(res)) > 0);
  hl_result_free(res);

  REQUIRE(hl_config_set(cfg, "experiment", "n", "100") == HL_OK);
  REQUIRE(hl_run_simulate(cfg, &res) == HL_OK);
  REQUIRE(hl_result_artifact_count(res) == 4);
  CHECK(std::string(hl_result_artifact_name(res, 0)) == "S_n.csv");
  CHECK(std::string(hl_result_artifact_data(res, 0)).rfind("t,value\n", 0) == 0);
  CHECK(hl_result_artifact_name(res, 9) == nullptr);
  hl_result_free(res);

  REQUIRE(hl_config_set(cfg, "experiment", "reps", "200") == HL_OK);
  REQUIRE(hl_run_experiment(cfg, "frechet", 2, &res) == HL_OK);
  const auto exp = nlohmann::json::parse(hl_result_json(res));
  CHECK(exp["kind"] == "frechet");
  hl_result_free(res);
  CHECK(hl_run_experiment(cfg, "unknown", 1, &res) == HL_ERR_INVALID_ARGUMENT);
  CHECK(hl_run_experiment(nullptr, "fdd", 1, &res) == HL_ERR_INVALID_ARGUMENT);
  hl_config_free(cfg);
}

TEST_CASE("numeric helpers") {
  CHECK(hl_h_distance(0, 2, 1) == 1.0);
  const double spike[] = {0, 0, 0, 1, 0, 0, 0};
  double w = -1;
  REQUIRE(hl_w_m1(spike, 7, 0.5, &w) == HL_OK);
  CHECK(w == 1.0);
  CHECK(hl_w_m1(spike, 1, 0.5, &w) == HL_ERR_INVALID_ARGUMENT);
  CHECK(hl_w_m1(spike, 7, 0.0, &w) == HL_ERR_INVALID_ARGUMENT);
  int64_t count = -1;
  REQUIRE(hl_count_eta_oscillations(spike, 7, 0.5, 0.0, 1.0, &count) == HL_OK);
  CHECK(count == 2);

  hl_config* cfg = nullptr;
  REQUIRE(hl_config_load_text("[model]\nalpha = 0.5\np = 1\nq = 0\n", &cfg) == HL_OK);
  double a = 0;
  REQUIRE(hl_norming_constant(cfg, 100, &a) == HL_OK);
  CHECK(a == doctest::Approx(10000.0));
  std::vector<double> y(100), y2(100);
  REQUIRE(hl_sample_innovations(cfg, 7, y.data(), y.size()) == HL_OK);
  REQUIRE(hl_sample_innovations(cfg, 7, y2.data(), y2.size()) == HL_OK);
  CHECK(y == y2);
  CHECK(*std::min_element(y.begin(), y.end()) >= 1.0);
  hl_config_free(cfg);

  double re = 0, im = 0;
  REQUIRE(hl_stable_chf(1.0, 0.5, 0.5, 1.0, &re, &im) == HL_OK);
  CHECK(re == doctest::Approx(std::exp(-M_PI / 2)).epsilon(1e-10));
  CHECK(std::abs(im) < 1e-14);
  CHECK(hl_stable_chf(1.0, 0.9, 0.1, 1.0, &re, &im) == HL_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(hl_last_error()) > 0);
}
