#pragma once

#include "fair/sim.hpp"

namespace fair {

// Parse a JSON scenario description. `origin` names the text's source in
// error messages; the returned config is already validated.
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin = "scenario");

// Read a scenario file and stamp its content digest into the config.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace fair
