#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ocpdmd/ocp_fom.hpp"

namespace ocpdmd {

/// Named preset: "graetz_analog" or "distributed_analog".
ParabolicOcpConfig preset(const std::string& name);

/// Builds a config from its JSON mirror. A "preset" key seeds the config
/// (optionally with "nx"/"ny" to resize the preset grid) and the remaining
/// keys override scalars; without a preset every field must be given, with
/// regions as grid-node lists. Closures are described by small objects:
///   "beta":          {"type": "zero" | "constant", "value": [bx, by]}
///                    {"type": "poiseuille", "scale": s}   ->  [s y (1 - y), 0]
///   "desired_state": {"type": "linear", "offset": a, "slope": b}   ->  a + b t
///                    {"type": "oscillating", "scale": s, "frequency": w, "phase": p}
///                                       ->  s (1 + t)(1 + cos(w t + p) / 2)
/// Throws InvalidArgument on any schema or value error.
ParabolicOcpConfig config_from_json(const nlohmann::json& doc);

ParabolicOcpConfig load_config(const std::filesystem::path& path);

/// Scalar summary of a config for run manifests.
nlohmann::json config_summary(const ParabolicOcpConfig& config);

/// FNV-1a 64-bit digest rendered as 16 hex digits.
std::string digest_hex(const std::string& bytes);

}  // namespace ocpdmd
