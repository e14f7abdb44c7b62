#pragma once

#include <string>
#include <vector>

#include "rig/scenario.hpp"
#include "rig/simulation.hpp"

namespace rig {

/// Scenario plus run controls resolved from a config file.
struct RunConfig {
  Scenario scenario;
  std::vector<PlanMode> modes{PlanMode::Resilient, PlanMode::NonResilient};
};

/// Loads a config from a table-style text file (TOML subset: sections,
/// key = value, single-line arrays, # comments) or, when the path ends in
/// .json, from the equivalent JSON object. Unknown sections or keys are
/// rejected; angle fields carry a _deg or _rad suffix and are converted to
/// radians here. Throws ConfigError.
RunConfig load_config(const std::string& path);

/// Same schema, from an in-memory TOML-subset document (for tests).
RunConfig parse_config_text(const std::string& text);

/// Canonical serialization of every semantic field, in fixed key order.
std::string canonical_config_json(const RunConfig& config);

/// FNV-1a 64 hash of the canonical serialization, as "fnv1a64:<hex>".
std::string config_hash(const RunConfig& config);

PlanMode parse_plan_mode(const std::string& name);

}  // namespace rig
