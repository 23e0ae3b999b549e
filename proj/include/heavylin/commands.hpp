#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heavylin/config.hpp"

namespace heavylin {

struct CommandResult {
  nlohmann::ordered_json report;
  /// (file name, CSV text)
  std::vector<std::pair<std::string, std::string>> artifacts;
  /// Plain-text summary for terminals.
  std::string table;
  bool passed = true;
};

CommandResult cmd_check(const Config& cfg);
CommandResult cmd_simulate(const Config& cfg);
CommandResult cmd_experiment(const std::string& kind, const Config& cfg, int threads = 0);

const char* library_version();

}  // namespace heavylin
