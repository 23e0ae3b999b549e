#include "heavylin/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "heavylin/conditions.hpp"
#include "heavylin/error.hpp"
#include "heavylin/linproc.hpp"
#include "heavylin/pathspace.hpp"

namespace heavylin {

using json = nlohmann::ordered_json;

const char* library_version() { return HEAVYLIN_VERSION; }

namespace {

json header(const std::string& command, const Config& cfg) {
  json j;
  j["command"] = command;
  j["version"] = library_version();
  j["seed"] = cfg.seed();
  j["config"] = cfg.resolved_text();
  return j;
}

json model_json(const TailModel& m) {
  return {{"alpha", m.alpha},
          {"p", m.p},
          {"q", m.q},
          {"centered", m.centered},
          {"h", {{"kind", m.h.kind_name()}, {"params", m.h.params()}}}};
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json corollary_json(const CorollaryResult& r) {
  json c;
  c["name"] = r.name;
  c["verdict"] = to_string(r.verdict);
  json k = json::object();
  for (const auto& [name, v] : r.constants) k[name] = number_or_null(v);
  c["constants"] = k;
  c["note"] = r.note;
  return c;
}

CorollaryResult inapplicable(const std::string& name, const std::string& note) {
  CorollaryResult r;
  r.name = name;
  r.note = note;
  return r;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

}  // namespace

CommandResult cmd_check(const Config& cfg) {
  const TailModel model = cfg.model();
  const CoefficientSeq seq = cfg.coefficients();
  const CheckSettings settings = cfg.check_settings();
  CommandResult out;
  json& rep = out.report = header("check", cfg);
  rep["model"] = model_json(model);

  json coeff;
  coeff["description"] = seq.describe();
  coeff["kind"] = seq.kind_name();
  coeff["empty"] = seq.empty();
  if (!seq.empty()) {
    coeff["lo"] = seq.lo();
    coeff["hi"] = seq.hi();
  }
  coeff["window"] = seq.window();
  const Aggregates agg = seq.aggregates();
  coeff["aggregates"] = {{"A", agg.A},
                         {"A_plus", agg.A_plus},
                         {"A_minus", agg.A_minus},
                         {"A_abs", agg.A_abs},
                         {"tail_bound", number_or_null(agg.tail_bound)}};
  const SeriesSum well = three_series_sum(seq, model);
  coeff["three_series"] = {{"partial", well.partial},
                           {"tail_bound", number_or_null(well.tail_bound)},
                           {"divergent", well.divergent},
                           {"well_defined", well.finite()}};
  rep["coefficients"] = coeff;

  json norming = json::array();
  for (std::int64_t n : settings.n_list) {
    norming.push_back({{"n", n}, {"a_n", norming_constant(model, static_cast<std::uint64_t>(n))}});
  }
  rep["norming"] = norming;

  const ConditionReport cond = fdd_condition_trend(seq, model, settings.n_list, settings.r, settings.threshold);
  json cj = json::parse(to_json(cond));
  cj["verdict"] = cond.consistent() ? "consistent with convergence to 0" : "inconclusive";
  rep["condition"] = cj;

  json simp = json::array();
  for (std::int64_t n : settings.n_list) {
    if (n < 2) continue;
    std::int64_t jn = settings.j_n;
    if (jn >= n) continue;
    const SimplifiedSums s = simplified_condition(seq, model, n, jn);
    simp.push_back({{"n", n},
                    {"j_n", s.j_n},
                    {"left", s.left},
                    {"right", s.right},
                    {"sup_d_left", s.sup_d_left},
                    {"sup_d_right", s.sup_d_right}});
  }
  rep["simplified"] = simp;

  json cors = json::array();
  if (settings.beta) {
    const double b = *settings.beta;
    if (b > 0.0 && b < model.alpha && b <= 1.0) {
      cors.push_back(corollary_json(check_c41(seq, model, b)));
    } else {
      cors.push_back(corollary_json(inapplicable("C4.1", "requires 0 < beta < alpha and beta <= 1")));
    }
  }
  cors.push_back(corollary_json(check_c42(seq, model)));
  cors.push_back(corollary_json(check_c43(seq, model)));
  if (settings.gamma) {
    const double g = *settings.gamma;
    if (g > 0.0 && g < model.alpha) {
      cors.push_back(corollary_json(check_c45(seq, model, g)));
    } else {
      cors.push_back(corollary_json(inapplicable("C4.5", "requires 0 < gamma < alpha")));
    }
  }
  rep["corollaries"] = cors;
  rep["passed"] = true;
  rep["failures"] = json::array();

  std::ostringstream table, csv;
  table << "n            left_sum        right_sum\n";
  csv << "n,left_sum,right_sum\n";
  for (std::size_t i = 0; i < cond.n_values.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof line, "%-12lld %-15s %-15s\n", static_cast<long long>(cond.n_values[i]),
                  sci(cond.left[i]).c_str(), sci(cond.right[i]).c_str());
    table << line;
    csv << cond.n_values[i] << ',' << json(cond.left[i]).dump() << ',' << json(cond.right[i]).dump() << '\n';
  }
  table << "trend: " << cj["verdict"].get<std::string>() << '\n';
  for (const auto& c : cors) {
    table << c["name"].get<std::string>() << ": " << c["verdict"].get<std::string>();
    if (!c["note"].get<std::string>().empty()) table << " (" << c["note"].get<std::string>() << ')';
    table << '\n';
  }
  out.table = table.str();
  out.artifacts.emplace_back("conditions.csv", csv.str());
  return out;
}

CommandResult cmd_simulate(const Config& cfg) {
  const ExperimentConfig e = cfg.experiment();
  e.model.validate();
  const SeriesSum well = three_series_sum(e.seq, e.model);
  if (!well.finite()) throw InvalidArgument("linear process is not well defined for these coefficients");
  CommandResult out;
  json& rep = out.report = header("simulate", cfg);
  const InnovationSampler sampler(e.model);
  const double a_n = norming_constant(e.model, static_cast<std::uint64_t>(e.n));
  Engine eng = make_engine(derive_seed(e.base_seed, 0));
  auto [lo, hi] = required_innovations(e.seq, e.n);
  const InnovationWindow y = draw_innovations(sampler, std::min<std::int64_t>(lo, 0), std::max(hi, e.n), eng);
  const ProcessValues x = build_process(e.seq, y, 1, e.n);
  const CadlagPath s = partial_sum_path(x.values, a_n);
  const CadlagPath z = innovation_path(y, e.n, a_n);
  const SplitPaths split = split_pm_paths(e.seq, y, e.n, a_n);

  rep["model"] = model_json(e.model);
  rep["coefficients"] = e.seq.describe();
  rep["n"] = e.n;
  rep["a_n"] = a_n;
  rep["A"] = e.seq.aggregates().A;
  rep["truncation_bound"] = number_or_null(x.truncation_bound);
  rep["innovation_window"] = {y.lo, y.hi()};
  rep["S_n"] = json::parse(to_json(modulus_report(s, e.deltas, e.etas)));
  rep["Z_n"] = json::parse(to_json(modulus_report(z, e.deltas, e.etas)));
  rep["final"] = {{"S_n", s.values.back()},
                  {"Z_n", z.values.back()},
                  {"T_plus", split.plus.values.back()},
                  {"T_minus", split.minus.values.back()}};
  rep["outputs"] = {"S_n.csv", "Z_n.csv", "T_plus.csv", "T_minus.csv"};
  rep["passed"] = true;
  rep["failures"] = json::array();
  out.artifacts.emplace_back("S_n.csv", s.to_csv());
  out.artifacts.emplace_back("Z_n.csv", z.to_csv());
  out.artifacts.emplace_back("T_plus.csv", split.plus.to_csv());
  out.artifacts.emplace_back("T_minus.csv", split.minus.to_csv());
  std::ostringstream table;
  table << "n = " << e.n << ", a_n = " << sci(a_n) << ", S_n(1) = " << sci(s.values.back())
        << ", Z_n(1) = " << sci(z.values.back()) << '\n';
  out.table = table.str();
  return out;
}

CommandResult cmd_experiment(const std::string& kind, const Config& cfg, int threads) {
  ExperimentConfig e = cfg.experiment();
  e.threads = threads;
  const ExperimentReport r = run_experiment(kind, e);
  CommandResult out;
  json& rep = out.report = header("experiment", cfg);
  const json body = r.to_json();
  for (const auto& [key, value] : body.items()) rep[key] = value;
  out.artifacts = r.artifacts;
  out.passed = r.passed();
  std::ostringstream table;
  for (const auto& c : r.checks) {
    table << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << sci(c.value) << ' ' << c.relation << ' '
          << sci(c.threshold) << '\n';
  }
  if (r.checks.empty()) table << "no acceptance checks configured for " << kind << '\n';
  out.table = table.str();
  return out;
}

}  // namespace heavylin
