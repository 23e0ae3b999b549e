#include "heavylin/heavylin.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "heavylin/commands.hpp"
#include "heavylin/error.hpp"
#include "heavylin/pathspace.hpp"
#include "heavylin/presets.hpp"

struct hl_config {
  heavylin::Config cfg;
  std::string text;
};

struct hl_result {
  std::string json;
  std::string table;
  bool passed = false;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

thread_local std::string last_error;

template <class F>
hl_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return HL_OK;
  } catch (const heavylin::Error& e) {
    last_error = e.what();
    return static_cast<hl_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HL_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw heavylin::InvalidArgument(std::string(what) + " is null");
}

hl_result* wrap(heavylin::CommandResult r) {
  auto* out = new hl_result;
  out->json = r.report.dump(2);
  out->table = std::move(r.table);
  out->passed = r.passed;
  out->artifacts = std::move(r.artifacts);
  return out;
}

heavylin::CadlagPath grid_path(const double* values, size_t count) {
  require(values, "values");
  if (count < 2) throw heavylin::InvalidArgument("a path needs at least two grid values");
  return heavylin::CadlagPath(static_cast<std::int64_t>(count - 1), std::vector<double>(values, values + count));
}

}  // namespace

extern "C" {

const char* hl_version(void) { return heavylin::library_version(); }

const char* hl_last_error(void) { return last_error.c_str(); }

hl_status hl_config_load_file(const char* path, hl_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new hl_config{heavylin::Config::load(path), {}};
  });
}

hl_status hl_config_load_text(const char* text, hl_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new hl_config{heavylin::Config::parse(text), {}};
  });
}

hl_status hl_config_from_preset(const char* name, hl_config** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new hl_config{heavylin::preset_config(name), {}};
  });
}

hl_status hl_config_set(hl_config* cfg, const char* section, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(section, "section");
    require(key, "key");
    require(value, "value");
    heavylin::Config next = cfg->cfg;
    next.set(section, key, value);
    // Re-parse so that bad values are reported now rather than at run time.
    cfg->cfg = heavylin::Config::parse(next.resolved_text());
  });
}

const char* hl_config_text(hl_config* cfg) {
  if (!cfg) return nullptr;
  cfg->text = cfg->cfg.resolved_text();
  return cfg->text.c_str();
}

void hl_config_free(hl_config* cfg) { delete cfg; }

size_t hl_preset_count(void) { return heavylin::preset_names().size(); }

const char* hl_preset_name(size_t index) {
  static const std::vector<std::string> names = heavylin::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

hl_status hl_run_check(const hl_config* cfg, hl_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = wrap(heavylin::cmd_check(cfg->cfg));
  });
}

hl_status hl_run_simulate(const hl_config* cfg, hl_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = wrap(heavylin::cmd_simulate(cfg->cfg));
  });
}

hl_status hl_run_experiment(const hl_config* cfg, const char* kind, int threads, hl_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(kind, "kind");
    require(out, "out");
    if (threads < 0) throw heavylin::InvalidArgument("threads must be nonnegative");
    *out = wrap(heavylin::cmd_experiment(kind, cfg->cfg, threads));
  });
}

const char* hl_result_json(const hl_result* res) { return res ? res->json.c_str() : nullptr; }

const char* hl_result_table(const hl_result* res) { return res ? res->table.c_str() : nullptr; }

int hl_result_passed(const hl_result* res) { return res && res->passed ? 1 : 0; }

size_t hl_result_artifact_count(const hl_result* res) { return res ? res->artifacts.size() : 0; }

const char* hl_result_artifact_name(const hl_result* res, size_t index) {
  if (!res || index >= res->artifacts.size()) return nullptr;
  return res->artifacts[index].first.c_str();
}

const char* hl_result_artifact_data(const hl_result* res, size_t index) {
  if (!res || index >= res->artifacts.size()) return nullptr;
  return res->artifacts[index].second.c_str();
}

void hl_result_free(hl_result* res) { delete res; }

double hl_h_distance(double a, double b, double c) { return heavylin::h_distance(a, b, c); }

hl_status hl_w_m1(const double* values, size_t count, double delta, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = heavylin::w_m1(grid_path(values, count), delta);
  });
}

hl_status hl_count_eta_oscillations(const double* values, size_t count, double eta, double s, double t,
                                    int64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = heavylin::count_eta_oscillations(grid_path(values, count), eta, s, t);
  });
}

hl_status hl_norming_constant(const hl_config* cfg, uint64_t n, double* out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    if (n == 0) throw heavylin::InvalidArgument("n must be positive");
    *out = heavylin::norming_constant(cfg->cfg.model(), n);
  });
}

hl_status hl_sample_innovations(const hl_config* cfg, uint64_t seed, double* out, size_t count) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    const std::vector<double> v = heavylin::sample_innovations(cfg->cfg.model(), count, seed);
    std::copy(v.begin(), v.end(), out);
  });
}

hl_status hl_stable_chf(double alpha, double p, double q, double theta, double* re, double* im) {
  return guarded([&] {
    require(re, "re");
    require(im, "im");
    const auto z = heavylin::stable_oracle_chf(alpha, p, q, theta);
    *re = z.real();
    *im = z.imag();
  });
}

}  // extern "C"
