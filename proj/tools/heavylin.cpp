// Command-line front end over the C API.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heavylin/heavylin.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitError = 2;

struct Options {
  std::string config_path;
  std::string preset;
  std::string manifest;
  std::string out_dir = ".";
  std::string kind;
  std::uint64_t seed = 0;
  std::int64_t reps = 0;
  std::int64_t n = 0;
  int threads = 0;
  bool quiet = false;
};

struct Failure {
  int code;
  std::string message;
};

void fail_if(hl_status st) {
  if (st != HL_OK) throw Failure{static_cast<int>(st), hl_last_error()};
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{HL_ERR_IO, "cannot write " + path.string()};
}

hl_config* load_config(const Options& o) {
  hl_config* cfg = nullptr;
  if (!o.config_path.empty() && !o.preset.empty()) {
    throw Failure{HL_ERR_INVALID_ARGUMENT, "--config and --preset are mutually exclusive"};
  }
  if (!o.config_path.empty()) {
    fail_if(hl_config_load_file(o.config_path.c_str(), &cfg));
  } else if (!o.preset.empty()) {
    fail_if(hl_config_from_preset(o.preset.c_str(), &cfg));
  } else {
    throw Failure{HL_ERR_INVALID_ARGUMENT, "one of --config or --preset is required"};
  }
  auto set = [&](const char* section, const char* key, const std::string& value) {
    const hl_status st = hl_config_set(cfg, section, key, value.c_str());
    if (st != HL_OK) {
      hl_config_free(cfg);
      fail_if(st);
    }
  };
  if (o.seed) set("model", "seed", std::to_string(o.seed));
  if (o.reps) set("experiment", "reps", std::to_string(o.reps));
  if (o.n) set("experiment", "n", std::to_string(o.n));
  return cfg;
}

int execute(const std::string& command, const std::string& kind, hl_config* cfg, const Options& o,
            const std::string& config_path, const std::string& preset) {
  hl_result* res = nullptr;
  hl_status st = HL_OK;
  if (command == "check") {
    st = hl_run_check(cfg, &res);
  } else if (command == "simulate") {
    st = hl_run_simulate(cfg, &res);
  } else {
    st = hl_run_experiment(cfg, kind.c_str(), o.threads, &res);
  }
  fail_if(st);
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    hl_result_free(res);
    throw Failure{HL_ERR_IO, "cannot create output directory " + dir.string()};
  }
  json outputs = json::array({"report.json"});
  write_file(dir / "report.json", std::string(hl_result_json(res)) + "\n");
  for (size_t i = 0; i < hl_result_artifact_count(res); ++i) {
    const std::string name = hl_result_artifact_name(res, i);
    write_file(dir / name, hl_result_artifact_data(res, i));
    outputs.push_back(name);
  }
  json manifest;
  manifest["command"] = command;
  manifest["kind"] = kind;
  manifest["config_path"] = config_path;
  manifest["preset"] = preset;
  manifest["resolved_config"] = hl_config_text(cfg);
  manifest["base_seed"] = json::parse(hl_result_json(res))["seed"];
  manifest["version"] = hl_version();
  manifest["outputs"] = outputs;
  manifest["timestamp"] = timestamp();
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  if (!o.quiet) std::cout << hl_result_table(res);
  const bool passed = hl_result_passed(res) != 0;
  if (!passed) {
    const json report = json::parse(hl_result_json(res));
    std::cerr << json{{"status", "checks_failed"}, {"failures", report["failures"]}}.dump() << '\n';
  }
  hl_result_free(res);
  return passed ? 0 : kExitChecksFailed;
}

int run_command(const std::string& command, const Options& o) {
  hl_config* cfg = load_config(o);
  try {
    const int rc = execute(command, o.kind, cfg, o, o.config_path, o.preset);
    hl_config_free(cfg);
    return rc;
  } catch (...) {
    hl_config_free(cfg);
    throw;
  }
}

int replay(const Options& o) {
  std::ifstream in(o.manifest, std::ios::binary);
  if (!in) throw Failure{HL_ERR_IO, "cannot open manifest " + o.manifest};
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw Failure{HL_ERR_CONFIG, std::string("malformed manifest: ") + e.what()};
  }
  const std::string command = manifest.value("command", "");
  if (command != "check" && command != "simulate" && command != "experiment") {
    throw Failure{HL_ERR_CONFIG, "manifest has no valid command"};
  }
  hl_config* cfg = nullptr;
  fail_if(hl_config_load_text(manifest.value("resolved_config", "").c_str(), &cfg));
  try {
    const int rc = execute(command, manifest.value("kind", ""), cfg, o, manifest.value("config_path", ""),
                           manifest.value("preset", ""));
    hl_config_free(cfg);
    return rc;
  } catch (...) {
    hl_config_free(cfg);
    throw;
  }
}

void add_config_options(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "Configuration file")->check(CLI::ExistingFile);
  sub->add_option("--preset", o.preset, "Bundled preset name");
  sub->add_option("--seed", o.seed, "Override the base seed");
  sub->add_option("--n", o.n, "Override the grid size")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out_dir, "Output directory");
  sub->add_flag("--quiet", o.quiet, "Do not print the summary table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed linear processes: conditions, paths and Monte Carlo checks"};
  app.set_version_flag("--version", std::string(hl_version()));
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Evaluate the convergence conditions for a configuration");
  add_config_options(check, o);

  auto* simulate = app.add_subcommand("simulate", "Write sample paths S_n, Z_n, T_n+ and T_n- as CSV");
  add_config_options(simulate, o);

  auto* experiment = app.add_subcommand("experiment", "Run a seeded Monte Carlo experiment");
  add_config_options(experiment, o);
  experiment->add_option("kind", o.kind, "fdd, frechet, m1, stat51 or tightness")
      ->required()
      ->check(CLI::IsMember({"fdd", "frechet", "m1", "stat51", "tightness"}));
  experiment->add_option("--reps", o.reps, "Override the replicate count")->check(CLI::PositiveNumber);
  experiment->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  auto* rep = app.add_subcommand("replay", "Re-run a command from its manifest");
  rep->add_option("--manifest", o.manifest, "manifest.json of a previous run")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", o.out_dir, "Output directory");
  rep->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  rep->add_flag("--quiet", o.quiet, "Do not print the summary table");

  auto* presets = app.add_subcommand("presets", "List bundled presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"status", "error"}, {"code", HL_ERR_INVALID_ARGUMENT}, {"failures", json::array({e.what()})}}.dump()
              << '\n';
    return kExitError;
  }

  try {
    if (presets->parsed()) {
      for (size_t i = 0; i < hl_preset_count(); ++i) std::cout << hl_preset_name(i) << '\n';
      return 0;
    }
    if (rep->parsed()) return replay(o);
    if (check->parsed()) return run_command("check", o);
    if (simulate->parsed()) return run_command("simulate", o);
    return run_command("experiment", o);
  } catch (const Failure& f) {
    std::cerr << json{{"status", "error"}, {"code", f.code}, {"failures", json::array({f.message})}}.dump() << '\n';
    return kExitError;
  }
}
