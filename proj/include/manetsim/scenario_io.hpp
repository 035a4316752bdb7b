#pragma once

#include <string>

#include "manetsim/scenario.hpp"

namespace manetsim {

// Parses and validates a scenario from JSON text. Omitted keys keep the
// default scenario's values; unknown keys are errors, because a config that
// silently ignores a misspelled knob runs the wrong experiment. Empty or
// whitespace-only text yields the defaults unchanged. Errors carry
// source_name plus the offending field (or line, for malformed JSON).
ScenarioConfig parse_scenario_json(const std::string& text, const std::string& source_name);

// parse_scenario_json over the contents of a file.
ScenarioConfig load_scenario_file(const std::string& path);

// Canonical JSON rendering with every knob explicit, durations in seconds.
// Parsing it back reproduces the config.
std::string normalized_json(const ScenarioConfig& cfg);

}  // namespace manetsim
