#pragma once

#include "negmu/config.hpp"

#include <nlohmann/json.hpp>

namespace negmu {

/// Config as an insertion-ordered JSON object; the key order is part of the
/// output format.
nlohmann::ordered_json config_to_json(const SimulationConfig& config);

} // namespace negmu
