#pragma once

#include <string>

#include "skilldisc/agent/config.hpp"

namespace skilldisc::cli {

/// Sectioned key = value text. `#` and `;` start comments. Keys missing
/// from the text keep their defaults; unknown sections or keys are errors.
/// The result is validated before it is returned.
agent::RunConfig parse_config(const std::string& text);
agent::RunConfig load_config(const std::string& path);

/// Every key, in a fixed order, with values that parse back exactly.
std::string serialize_config(const agent::RunConfig& config);

}  // namespace skilldisc::cli
