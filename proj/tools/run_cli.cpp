#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qnucleus/errors.hpp"

namespace qcli {

int run_cli(int argc, char** argv) {
    CLI::App app{"q-convexity toolkit: Levi scans, spherical-cut nuclei, glued q-convex functions"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> sets;
    std::string scene, out;
    std::optional<long long> seed;
    std::optional<int> resolution, q;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "dotted.path=value override (repeatable)");
    app.add_option("--scene", scene, "scene name");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--resolution", resolution, "cells per axis (0: scene default)");
    app.add_option("--q", q, "convexity index q");
    app.add_option("--out", out, "output directory");

    auto* levi = app.add_subcommand("levi-scan", "classify a field over the scene region");
    auto* nucleus = app.add_subcommand("nucleus", "approximate the q-nucleus by spherical cuts");
    auto* construct = app.add_subcommand("construct", "build and certify a q-convex function with corners");
    auto* verify = app.add_subcommand("verify", "continuity-principle probes");
    verify->require_subcommand(1);
    std::string verify_sub;
    for (const char* name : {"hat-fill", "disc-sweep", "hartogs", "local-max", "exhaustion-fill"})
        verify->add_subcommand(name, "")->callback([&verify_sub, name] { verify_sub = name; });
    auto* scene_cmd = app.add_subcommand("scene", "scene catalogue");
    scene_cmd->require_subcommand(1);
    auto* scene_list = scene_cmd->add_subcommand("list", "print scene names");
    auto* scene_run = scene_cmd->add_subcommand("run", "run a scene's expectations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExecError;
    }

    try {
        if (scene_list->parsed()) return cmd_scene_list();
        std::vector<std::string> all = sets;
        if (!scene.empty()) all.insert(all.begin(), "scene=\"" + scene + "\"");
        if (seed) all.insert(all.begin(), "seed=" + std::to_string(*seed));
        if (resolution) all.insert(all.begin(), "resolution=" + std::to_string(*resolution));
        if (q) all.insert(all.begin(), "q=" + std::to_string(*q));
        if (!out.empty()) all.insert(all.begin(), "out=\"" + out + "\"");
        const json cfg = resolve_config(config_path, all);

        if (levi->parsed()) return cmd_levi_scan(cfg);
        if (nucleus->parsed()) return cmd_nucleus(cfg);
        if (construct->parsed()) return cmd_construct(cfg);
        if (verify->parsed()) return cmd_verify(cfg, verify_sub);
        if (scene_run->parsed()) return cmd_scene_run(cfg);
        return kExecError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExecError;
    }
}

}  // namespace qcli
