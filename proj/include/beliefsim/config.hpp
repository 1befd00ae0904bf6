#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefsim/world.hpp"

namespace beliefsim {

/// Everything needed to reproduce a batch of runs.
struct ExperimentConfig {
  std::string name = "experiment";
  WorldConfig world;
  double dt = 0.1;
  int steps = 2000;
  int sample_every = 5;
  int repetitions = 1;
  std::uint64_t seed = 1;
  // Scale every population's horizon by sqrt(dimensions) when the world is built.
  bool sqrt_dim_scaling = false;

  void validate() const;

  /// The world actually simulated: horizons scaled when sqrt_dim_scaling is set.
  WorldConfig effective_world() const;
};

/// Parse YAML text. Unknown keys and out-of-range values raise ConfigError
/// naming the field. `dimensions` and `populations` have no defaults.
ExperimentConfig parse_config(const std::string& yaml_text);

/// Load a config file, or a bundled preset when `path_or_preset` names one
/// and no such file exists.
ExperimentConfig load_config(const std::string& path_or_preset);

/// Names of the bundled presets, sorted.
std::vector<std::string> preset_names();
/// YAML text of a bundled preset. Throws std::out_of_range for unknown names.
const std::string& preset_text(const std::string& name);
ExperimentConfig load_preset(const std::string& name);

/// Canonical JSON form, keys sorted. Round-trips through parse_config.
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig from_json(const nlohmann::json& json);
nlohmann::json to_json(const HerdingPolicy& policy);
HerdingPolicy herding_from_json(const nlohmann::json& json);

/// 16 hex digit FNV-1a digest of the canonical JSON. Independent of key order in the source file.
std::string config_digest(const ExperimentConfig& config);

}  // namespace beliefsim
