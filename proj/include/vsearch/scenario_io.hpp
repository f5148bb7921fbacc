#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vsearch/world.hpp"

namespace vsearch {

/// Parses and validates a scenario document. Throws ParseError naming the
/// offending field, or ValidationError for invariant violations.
ScenarioSpec load_scenario(std::string_view source);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

/// Canonical JSON text; load_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const ScenarioSpec& scenario);

/// Hyperparameter and vocabulary blocks in the scenario schema; unknown keys are rejected.
HyperParams hyperparams_from_json(const nlohmann::json& j);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

}  // namespace vsearch
