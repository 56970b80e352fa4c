#pragma once

#include <string>

#include <json.hpp>

#include "qnucleus/core.hpp"

namespace qnucleus {

nlohmann::json to_json(const ChartBox& box);
ChartBox box_from_json(const nlohmann::json& j);

std::vector<std::int64_t> run_lengths(const VoxelSet& set);
nlohmann::json voxelset_to_json(const VoxelSet& set);
VoxelSet voxelset_from_json(const nlohmann::json& j);

// Written to a temporary sibling, then renamed over the target.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace qnucleus
