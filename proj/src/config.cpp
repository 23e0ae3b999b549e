#include "heavylin/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "heavylin/error.hpp"

namespace heavylin {

namespace pt = boost::property_tree;

const std::vector<std::pair<std::string, std::vector<std::string>>>& config_schema() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> schema = {
      {"model", {"alpha", "p", "q", "h.kind", "h.params", "centered", "seed"}},
      {"coefficients", {"kind", "offset", "values", "alpha", "eps", "ratio", "exponent", "window", "signs"}},
      {"experiment",
       {"n", "reps", "t_points", "deltas", "etas", "eps", "n_list", "beta", "gamma", "r", "threshold", "j_n",
        "zeta", "xi", "reference_size", "dump_replicates", "ks_max", "prob_max", "theta_tol", "median_ratio"}},
  };
  return schema;
}

namespace {

const std::vector<std::string>* schema_keys(const std::string& section) {
  for (const auto& [name, keys] : config_schema()) {
    if (name == section) return &keys;
  }
  return nullptr;
}

void check_known(const std::string& section, const std::string& key, int line) {
  const auto* keys = schema_keys(section);
  if (!keys) throw ConfigError("unknown section [" + section + "]", line);
  if (std::find(keys->begin(), keys->end(), key) == keys->end()) {
    throw ConfigError("unknown key '" + key + "' in section [" + section + "]", line);
  }
}

// Line of each "key = value" entry, keyed by (section, key); section headers use an empty key.
std::map<std::pair<std::string, std::string>, int> entry_lines(const std::string& text) {
  std::map<std::pair<std::string, std::string>, int> lines;
  std::istringstream in(text);
  std::string raw, section;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = boost::trim_copy(raw);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = boost::trim_copy(line.substr(1, line.size() - 2));
      lines.try_emplace({section, ""}, number);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    lines[{section, boost::trim_copy(line.substr(0, eq))}] = number;
  }
  return lines;
}

template <class T>
T parse_number(const std::string& text, const std::string& what, int line) {
  T value{};
  const std::string s = boost::trim_copy(text);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (s.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("invalid value '" + s + "' for " + what, line);
  }
  return value;
}

template <>
bool parse_number<bool>(const std::string& text, const std::string& what, int line) {
  const std::string s = boost::to_lower_copy(boost::trim_copy(text));
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + what, line);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  const std::string s = boost::trim_copy(text);
  if (s.empty()) return parts;
  boost::split(parts, s, boost::is_any_of(","));
  for (auto& p : parts) boost::trim(p);
  return parts;
}

}  // namespace

Config Config::parse(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), static_cast<int>(e.line()));
  }
  const auto lines = entry_lines(text);
  for (const auto& [where, line] : lines) {
    if (where.second.empty() && !schema_keys(where.first)) {
      throw ConfigError("unknown section [" + where.first + "]", line);
    }
  }
  Config cfg;
  for (const auto& [section, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      const auto it = lines.find({"", section});
      throw ConfigError("key '" + section + "' outside of a section", it == lines.end() ? 0 : it->second);
    }
    if (!schema_keys(section)) {
      const auto it = lines.find({section, ""});
      const int line = it == lines.end() ? 0 : it->second;
      throw ConfigError("unknown section [" + section + "]", line);
    }
    auto& entries = cfg.sections_[section];
    for (const auto& [key, value] : child) {
      const auto it = lines.find({section, key});
      const int line = it == lines.end() ? 0 : it->second;
      check_known(section, key, line);
      entries[key] = Entry{boost::trim_copy(value.data()), line};
    }
  }
  // Surface value errors at load time, with line numbers.
  cfg.model();
  cfg.seed();
  cfg.coefficients();
  cfg.experiment();
  cfg.check_settings();
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  check_known(section, key, 0);
  sections_[section][key] = Entry{boost::trim_copy(value), 0};
}

void Config::erase(const std::string& section, const std::string& key) {
  auto it = sections_.find(section);
  if (it != sections_.end()) it->second.erase(key);
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return e->value;
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::string Config::resolved_text() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, keys] : config_schema()) {
    const auto s = sections_.find(section);
    if (s == sections_.end() || s->second.empty()) continue;
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& key : keys) {
      const auto k = s->second.find(key);
      if (k != s->second.end()) out << key << " = " << k->second.value << '\n';
    }
  }
  return out.str();
}

template <class T>
std::optional<T> Config::typed(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return parse_number<T>(e->value, section + "." + key, e->line);
}

template <class T>
std::optional<std::vector<T>> Config::typed_list(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  std::vector<T> out;
  for (const auto& part : split_list(e->value)) out.push_back(parse_number<T>(part, section + "." + key, e->line));
  return out;
}

TailModel Config::model() const {
  TailModel m;
  m.alpha = typed<double>("model", "alpha").value_or(m.alpha);
  const auto p = typed<double>("model", "p");
  const auto q = typed<double>("model", "q");
  if (p && q) {
    m.p = *p;
    m.q = *q;
  } else if (p) {
    m.p = *p;
    m.q = 1.0 - *p;
  } else if (q) {
    m.q = *q;
    m.p = 1.0 - *q;
  }
  m.centered = typed<bool>("model", "centered").value_or(true);
  const Entry* kind = find("model", "h.kind");
  const std::vector<double> params = typed_list<double>("model", "h.params").value_or(std::vector<double>{});
  try {
    m.h = SlowlyVarying::from_spec(kind ? kind->value : "constant", params);
  } catch (const Error& e) {
    throw ConfigError(e.what(), kind ? kind->line : 0);
  }
  try {
    m.validate();
  } catch (const Error& e) {
    const Entry* a = find("model", "alpha");
    throw ConfigError(e.what(), a ? a->line : 0);
  }
  return m;
}

std::uint64_t Config::seed() const { return typed<std::uint64_t>("model", "seed").value_or(1); }

CoefficientSeq Config::coefficients() const {
  const Entry* kind_entry = find("coefficients", "kind");
  const std::string kind = kind_entry ? kind_entry->value : "finite_support";
  const int line = kind_entry ? kind_entry->line : 0;
  try {
    const std::int64_t window = typed<std::int64_t>("coefficients", "window").value_or(10000);
    const Entry* signs_entry = find("coefficients", "signs");
    const SignSpec signs = SignSpec::parse(signs_entry ? signs_entry->value : "positive");
    if (kind == "finite_support") {
      return CoefficientSeq::finite_support(typed<std::int64_t>("coefficients", "offset").value_or(0),
                                            typed_list<double>("coefficients", "values").value_or(std::vector<double>{}));
    }
    if (kind == "power_log") {
      const auto alpha = typed<double>("coefficients", "alpha");
      const auto eps = typed<double>("coefficients", "eps");
      if (!alpha || !eps) throw ConfigError("power_log needs alpha and eps", line);
      return CoefficientSeq::power_log(*alpha, *eps, window, signs);
    }
    if (kind == "geometric") {
      const auto ratio = typed<double>("coefficients", "ratio");
      if (!ratio) throw ConfigError("geometric needs ratio", line);
      return CoefficientSeq::geometric(*ratio, window, signs);
    }
    if (kind == "power") {
      const auto expo = typed<double>("coefficients", "exponent");
      if (!expo) throw ConfigError("power needs exponent", line);
      return CoefficientSeq::power(*expo, window, signs);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), line);
  }
  throw ConfigError("unknown coefficient kind '" + kind + "'", line);
}

ExperimentConfig Config::experiment() const {
  ExperimentConfig e;
  e.model = model();
  e.seq = coefficients();
  e.base_seed = seed();
  const std::string s = "experiment";
  e.n = typed<std::int64_t>(s, "n").value_or(e.n);
  e.reps = typed<std::int64_t>(s, "reps").value_or(e.reps);
  e.t_points = typed_list<double>(s, "t_points").value_or(e.t_points);
  e.deltas = typed_list<double>(s, "deltas").value_or(e.deltas);
  e.etas = typed_list<double>(s, "etas").value_or(e.etas);
  e.eps = typed_list<double>(s, "eps").value_or(e.eps);
  e.n_list = typed_list<std::int64_t>(s, "n_list").value_or(e.n_list);
  e.beta = typed<double>(s, "beta").value_or(e.beta);
  e.zeta = typed<double>(s, "zeta");
  e.xi = typed<double>(s, "xi");
  e.reference_size = typed<std::int64_t>(s, "reference_size").value_or(e.reference_size);
  e.dump_replicates = typed<bool>(s, "dump_replicates").value_or(false);
  e.thresholds.ks = typed<double>(s, "ks_max").value_or(e.thresholds.ks);
  e.thresholds.probability = typed<double>(s, "prob_max").value_or(e.thresholds.probability);
  e.thresholds.theta_tolerance = typed<double>(s, "theta_tol").value_or(e.thresholds.theta_tolerance);
  e.thresholds.median_ratio = typed<double>(s, "median_ratio").value_or(e.thresholds.median_ratio);
  if (e.n < 1) throw ConfigError("experiment.n must be positive", find(s, "n")->line);
  if (e.reps < 1) throw ConfigError("experiment.reps must be positive", find(s, "reps")->line);
  return e;
}

CheckSettings Config::check_settings() const {
  CheckSettings c;
  const std::string s = "experiment";
  c.n_list = typed_list<std::int64_t>(s, "n_list").value_or(c.n_list);
  c.r = typed<double>(s, "r").value_or(c.r);
  c.threshold = typed<double>(s, "threshold").value_or(c.threshold);
  c.beta = typed<double>(s, "beta");
  c.gamma = typed<double>(s, "gamma");
  c.j_n = typed<std::int64_t>(s, "j_n").value_or(0);
  if (c.n_list.empty()) throw ConfigError("experiment.n_list is empty", find(s, "n_list")->line);
  if (!(c.r > 0.0)) throw ConfigError("experiment.r must be positive", find(s, "r")->line);
  return c;
}

}  // namespace heavylin
