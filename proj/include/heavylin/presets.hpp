#pragma once

#include <string>
#include <vector>

#include "heavylin/config.hpp"

namespace heavylin {

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
const std::string& preset_text(const std::string& name);
Config preset_config(const std::string& name);

}  // namespace heavylin
