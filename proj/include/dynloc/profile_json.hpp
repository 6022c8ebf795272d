#pragma once

// JSON form of DriveProfile. Documents carry a "type" discriminator
// (static | mono | bichromatic | flipped | fourier) and the fields of the
// matching struct; see docs/profile_schema.md.

#include "dynloc/model.hpp"

#include <json.hpp>

namespace dynloc {

nlohmann::json to_json(const DriveProfile& profile);

/// Strict: unknown keys or missing fields throw std::invalid_argument.
DriveProfile profile_from_json(const nlohmann::json& document);

nlohmann::json to_json(const ResonanceClass& resonance);

} // namespace dynloc
