#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qcli {

using nlohmann::json;

enum Exit { kOk = 0, kExecError = 1, kFindings = 2, kIterCap = 3, kConstructError = 4 };

json default_config();

// "a.b.c=value"; value is parsed as JSON when it parses, kept as a string otherwise.
void apply_override(json& cfg, const std::string& assignment);

// defaults < file < --set
json resolve_config(const std::string& config_path, const std::vector<std::string>& sets);

// Writes <out>/<name> atomically plus a <name>.meta.json sidecar holding the wall-clock time.
std::string write_report(const json& cfg, const std::string& name, const std::string& payload);
std::string write_report(const json& cfg, const std::string& name, const json& payload);

}  // namespace qcli
