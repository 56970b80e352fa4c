#pragma once

#include <string>

#include "cli_support.hpp"

namespace qcli {

int cmd_levi_scan(const json& cfg);
int cmd_nucleus(const json& cfg);
int cmd_construct(const json& cfg);
int cmd_verify(const json& cfg, const std::string& sub);
int cmd_scene_list();
int cmd_scene_run(const json& cfg);

// Full command line, exceptions mapped to exit codes.
int run_cli(int argc, char** argv);

}  // namespace qcli
