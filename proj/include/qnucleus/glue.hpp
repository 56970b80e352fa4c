#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnucleus/bump.hpp"
#include "qnucleus/cuts.hpp"

namespace qnucleus {

struct GlueRegion {
    VoxelSet V1, V2, K;
    VoxelSet seam_in;   // boundary(V1) & V2 & K: the second branch must dominate
    VoxelSet seam_out;  // boundary(V2) & V1 & K: the first branch must dominate

    static GlueRegion make(const VoxelSet& V1, const VoxelSet& V2, const VoxelSet& K);
};

struct Provenance {
    int step = -1;       // index of the hat in the emptying sequence
    int hat_index = -1;
};

// Tree of leaves (scaled branch on a support) and max nodes.
struct ConstructedNode {
    enum class Kind { Leaf, Max };
    Kind kind = Kind::Leaf;

    // leaf
    ScalarField field;
    double scale = 1.0;
    VoxelSet support;
    Provenance provenance;
    std::optional<HatPair> hat;

    // max node: first child lives on V1, second on V2
    std::shared_ptr<const ConstructedNode> first, second;
    VoxelSet V1, V2;

    ConstructedNode() : support(ChartBox::cube(1, 1.0, 1)), V1(support), V2(support) {}
};

struct ConstructedFunction {
    std::shared_ptr<const ConstructedNode> root;
    VoxelSet W;
    std::vector<double> scales;      // c per construction step, in order of application
    std::vector<std::string> notes;  // shrink retries and similar
    const ChartBox& box() const { return W.box(); }
};

ConstructedFunction leaf_function(const ScalarField& field, double scale, const VoxelSet& support,
                                  Provenance prov = {}, std::optional<HatPair> hat = std::nullopt);

// Value anywhere in its voxel domain; DomainError outside W.
double evaluate_constructed(const ConstructedFunction& f, const CPoint& p);
// Scaled leaves attaining the value at p.
std::vector<const ConstructedNode*> active_leaves(const ConstructedFunction& f, const CPoint& p);

inline constexpr double kDefaultScalingMargin = 0.5;
inline constexpr double kDefaultSeamTolerance = 1e-6;

double choose_scaling(const ConstructedFunction& psi, const ScalarField& phi, const VoxelSet& seam_in,
                      const VoxelSet& seam_out, double margin = kDefaultScalingMargin);

ConstructedFunction glue_pair(const ConstructedFunction& f1, const ConstructedFunction& f2, const VoxelSet& K,
                              double tolerance = kDefaultSeamTolerance);

struct BuildOptions {
    BumpParams params;
    double margin = kDefaultScalingMargin;
    double tolerance = kDefaultSeamTolerance;
    int dilation = 2;  // V1 = dilate^d(K_j) & U_j
};

ConstructedFunction build_q_convex(const VoxelSet& K, const CutSequence& seq, int q, const AmbientDomain& ambient,
                                   const BuildOptions& opt = {});

struct CertifyOptions {
    double tau = kDefaultTau;
    double step = kDefaultStep;
    int samples = 10000;
    std::uint64_t seed = 0;
    int max_witnesses = 5;
};

struct CertifyReport {
    std::int64_t samples = 0;
    std::int64_t positive_failures = 0;
    std::int64_t convexity_failures = 0;
    std::int64_t flagged_marginal = 0;
    double min_value = 0.0;
    int worst_q_min_strict = 0;
    std::vector<CPoint> witnesses;
    bool pass() const { return samples > 0 && positive_failures == 0 && convexity_failures == 0; }
};

CertifyReport certify_constructed(const ConstructedFunction& f, const VoxelSet& K, int q,
                                  const CertifyOptions& opt = {});

ConstructedFunction negated(const ConstructedFunction& f);

nlohmann::json to_json(const ConstructedFunction& f);
nlohmann::json to_json(const CertifyReport& r);
// Rebuilds leaves from their hats; needs q and bump parameters.
ConstructedFunction constructed_from_json(const nlohmann::json& j, int q, const BumpParams& params = {});

}  // namespace qnucleus
