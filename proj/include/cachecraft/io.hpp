#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "cachecraft/model.hpp"

namespace cachecraft {

using Json = nlohmann::json;

// Config schema:
//   {"K":int, "N":int, "F":[real], "p":[real], "M":[real],
//    "classes":{"K_S":int, "M_S":real, "M_L":real}}
// "zipf_s" may stand in for "p". "M" may be a single number (same size for
// every user) and may be omitted when "classes" is present.
SystemConfig config_from_json(const Json& j);
Json config_to_json(const SystemConfig& cfg);

// Throws Error on I/O or parse failure, ValidationError on bad content.
SystemConfig load_config(const std::filesystem::path& path);
void save_config(const SystemConfig& cfg, const std::filesystem::path& path);

// {"K":int, "N":int, "subfiles":[{subset key: size}], "mu":[[...] per user]}
// with keys from subset_key(). Zero-size subfiles are omitted on output.
Json placement_to_json(const Placement& pl);
Placement placement_from_json(const Json& j);
Placement load_placement(const std::filesystem::path& path);

Json grouped_to_json(const GroupedScheme& gs);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cachecraft
