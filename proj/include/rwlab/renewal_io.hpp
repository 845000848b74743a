#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "rwlab/ladder.hpp"

namespace rwlab {

nlohmann::json renewal_to_json(const RenewalTable& table);
// Re-validates the harmonicity of V; throws TableInconsistency on failure and
// ConfigError on a schema mismatch.
RenewalTable renewal_from_json(const nlohmann::json& j);

void save_renewal_table(const RenewalTable& table, const std::string& path);
RenewalTable load_renewal_table(const std::string& path);

}  // namespace rwlab
