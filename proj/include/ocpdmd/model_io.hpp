#pragma once

// Model files: a JSON header next to SNP1 blocks for the dense arrays.
// Complex arrays are stored as 2n x r real blocks with rows interleaved
// (re, im) per entry.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ocpdmd/dmdc.hpp"
#include "ocpdmd/partitioned.hpp"

namespace ocpdmd {

/// Writes `<prefix>_*.snp` blocks into `dir` and returns the JSON header
/// (block file names are relative to `dir`).
nlohmann::json save_dmdc_model(const DmdcModel& model, const std::filesystem::path& dir,
                               const std::string& prefix);
DmdcModel load_dmdc_model(const nlohmann::json& header, const std::filesystem::path& dir);

/// `path` is the JSON file; blocks go next to it.
void save_partitioned_model(const PartitionedModel& model, const std::filesystem::path& path,
                            const nlohmann::json& extra = nlohmann::json::object());
PartitionedModel load_partitioned_model(const std::filesystem::path& path);

/// Reads the JSON document of a saved partitioned model (including `extra`).
nlohmann::json read_json(const std::filesystem::path& path);
void write_json_atomically(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace ocpdmd
