#pragma once

#include <string>
#include <vector>

#include "fp/experiment.hpp"

namespace fp {

/// Frozen experiment presets. The JSON snapshots committed under presets/
/// must match these definitions byte for byte; changing a preset is a
/// breaking change gated by the config version.
std::vector<std::string> preset_names();
ExperimentConfig preset_config(const std::string& name);
std::string preset_description(const std::string& name);

}  // namespace fp
