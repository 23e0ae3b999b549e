#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heavylin/coefficients.hpp"
#include "heavylin/montecarlo.hpp"
#include "heavylin/tail_innovations.hpp"

namespace heavylin {

/// Settings used by the condition check command.
struct CheckSettings {
  std::vector<std::int64_t> n_list{100, 1000, 10000};
  double r = 1.0;
  double threshold = 1e-2;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::int64_t j_n = 0;
};

/// INI-style run configuration with sections [model], [coefficients] and
/// [experiment]. Values are kept as text; typed views are built on demand.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  /// Sets or replaces a value; the key must belong to the schema.
  void set(const std::string& section, const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void erase(const std::string& section, const std::string& key);

  /// Canonical text: fixed section and key order, one entry per line.
  std::string resolved_text() const;

  TailModel model() const;
  std::uint64_t seed() const;
  CoefficientSeq coefficients() const;
  ExperimentConfig experiment() const;
  CheckSettings check_settings() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;

  const Entry* find(const std::string& section, const std::string& key) const;
  template <class T>
  std::optional<T> typed(const std::string& section, const std::string& key) const;
  template <class T>
  std::optional<std::vector<T>> typed_list(const std::string& section, const std::string& key) const;
};

/// Known keys per section, in canonical order.
const std::vector<std::pair<std::string, std::vector<std::string>>>& config_schema();

}  // namespace heavylin
