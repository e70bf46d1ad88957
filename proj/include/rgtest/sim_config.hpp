#pragma once

#include <string>

#include "json.hpp"
#include "rgtest/simulation.hpp"

namespace rgtest {

/// Parses and validates a SimConfig document, collecting every problem before
/// throwing a single config error that lists them all.
SimConfig parse_sim_config(const nlohmann::json& doc);
SimConfig load_sim_config(const std::string& path);

/// Effective configuration, defaults included.
nlohmann::json to_json(const SimConfig& config);
nlohmann::json to_json(const DistributionSpec& spec);

}  // namespace rgtest
