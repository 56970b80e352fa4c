#include "cli_support.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "qnucleus/errors.hpp"
#include "qnucleus/io.hpp"

namespace qcli {

json default_config() {
    return {
        {"scene", "ball"},
        {"resolution", 0},
        {"seed", 0},
        {"q", nullptr},
        {"out", "qnucleus-out"},
        {"family", json::object()},
        {"levi", {{"field", ""}, {"strict", true}, {"tau", 1e-7}, {"step", 1e-3}, {"jitter", 0}, {"csv", true}}},
        {"nucleus", {{"max_iter", 50}, {"threads", 0}}},
        {"construct",
         {{"sequence", ""}, {"samples", 10000}, {"tau", 1e-7}, {"margin", 0.5}, {"tolerance", 1e-6}, {"dilation", 2}}},
        {"verify",
         {{"surface", 4096},
          {"filled", 4096},
          {"hat", nullptr},
          {"base", nullptr},
          {"t_steps", 64},
          {"disc_samples", 256},
          {"field", ""},
          {"tau_gap", -1.0},
          {"balls", json::array()}}},
    };
}

void apply_override(json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw qnucleus::InputError("--set expects path=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* node = &cfg;
    std::stringstream ss(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(ss, key, '.')) {
        if (key.empty()) throw qnucleus::InputError("empty key in --set " + path);
        keys.push_back(key);
    }
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        json& next = (*node)[keys[i]];
        if (!next.is_object()) next = json::object();
        node = &next;
    }
    (*node)[keys.back()] = value;
}

json resolve_config(const std::string& config_path, const std::vector<std::string>& sets) {
    json cfg = default_config();
    if (!config_path.empty()) {
        const json file = qnucleus::read_json_file(config_path);
        if (!file.is_object()) throw qnucleus::InputError("config file must hold a JSON object");
        cfg.merge_patch(file);
    }
    for (const auto& s : sets) apply_override(cfg, s);
    return cfg;
}

std::string write_report(const json& cfg, const std::string& name, const std::string& payload) {
    const std::filesystem::path dir = cfg.at("out").get<std::string>();
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    qnucleus::write_file_atomic(path, payload);

    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    qnucleus::write_file_atomic(path + ".meta.json", json{{"file", name}, {"written_at", stamp}}.dump(2) + "\n");
    return path;
}

std::string write_report(const json& cfg, const std::string& name, const json& payload) {
    return write_report(cfg, name, payload.dump(2) + "\n");
}

}  // namespace qcli
