#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diffnet/scenario.hpp"

namespace diffnet {

struct PresetInfo {
  std::string name;
  std::string description;
  std::function<ScenarioConfig(uint64_t seed)> make;
};

// Catalog of the bundled experiments: the two-node toy, the four stationary
// theory-validation scalings, the tracking-validation sweep, and the
// stationary/fast/slow comparison families.
const std::vector<PresetInfo>& preset_registry();

bool preset_exists(const std::string& name);
ScenarioConfig make_preset(const std::string& name, uint64_t seed);

}  // namespace diffnet
