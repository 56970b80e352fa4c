#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnucleus/bump.hpp"
#include "qnucleus/cuts.hpp"
#include "qnucleus/verify.hpp"

namespace qnucleus {

// Fields with analytic Hessians: norm2, re_z1_squared, indefinite, cp_rho, psi_r,
// ball_exhaustion, re_z2, neg_norm2.
std::vector<std::string> catalogue_field_names();
ScalarField catalogue_field(const std::string& name, int n = 2);

struct Expectation {
    std::string name;
    std::string kind;  // nucleus_empty | retains_graph | classify | levi_scan | hat_fill_violation |
                       // hartogs_violation | exhaustion_pass | documentation_only
    nlohmann::json details = nlohmann::json::object();
};

struct SceneConfig {
    std::string name;
    int resolution = 0;  // 0: scene default
    std::uint64_t seed = 0;
    nlohmann::json overrides = nlohmann::json::object();
};

struct Scene {
    std::string name;
    int n = 2;
    int q = 1;
    ChartBox box = ChartBox::cube(2, 1.0, 1);
    AmbientDomain ambient = AmbientDomain::full(ChartBox::cube(2, 1.0, 1));
    VoxelSet K = VoxelSet(ChartBox::cube(2, 1.0, 1));
    std::map<std::string, ScalarField> fields;
    HatFamilyConfig family;
    std::vector<Expectation> expectations;

    // scene-specific extras
    std::optional<DomainSpec> omega;
    std::optional<HatPair> probe_hat;
    std::optional<HartogsFigure> figure;
    std::optional<AffineMap> figure_embedding;
    std::optional<VoxelSet> graph_cells;  // analytic-tube: cells within one diagonal of the graph
};

std::vector<std::string> scene_names();
Scene make_scene(const SceneConfig& config);
Scene make_scene(const std::string& name, int resolution = 0);

// Cells of `box` whose centers lie within `radius` of {z_2 = z_1^2}.
VoxelSet graph_neighbourhood(const ChartBox& box, double radius);

struct ExpectationResult {
    std::string name;
    std::string kind;
    bool pass = false;
    nlohmann::json detail;
};

struct SceneReport {
    std::string scene;
    std::vector<ExpectationResult> results;
    bool pass() const;
};

SceneReport run_expectations(const Scene& scene, const SceneConfig& config = {});

nlohmann::json to_json(const SceneReport& r);
SceneConfig scene_config_from_json(const nlohmann::json& j);

}  // namespace qnucleus
