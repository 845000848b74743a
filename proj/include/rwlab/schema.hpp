#pragma once

#include <json.hpp>
#include <string_view>

#include "rwlab/steplaw.hpp"

namespace rwlab {

// Version tag written into every JSON document and CSV header the library
// produces.
inline constexpr std::string_view kSchemaVersion = "rwlab/1";

nlohmann::json law_to_json(const StepLaw& law);
// Rebuilds (and re-validates) a law written by law_to_json.
StepLaw law_from_json(const nlohmann::json& j);

}  // namespace rwlab
