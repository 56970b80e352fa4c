#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qnucleus/field.hpp"
#include "qnucleus/hats.hpp"

namespace qnucleus {

// Open set given by an exact predicate, plus the box it is voxelized on.
struct DomainSpec {
    std::string name;
    Predicate contains;
    ChartBox box;

    bool operator()(const CPoint& p) const { return contains(p); }
    VoxelSet voxelization() const { return voxelize(contains, box, VoxelizeMode::Centers); }
};

DomainSpec domain_everything(const ChartBox& box);
DomainSpec domain_ball(const ChartBox& box, double radius);               // B(0, radius)
DomainSpec domain_ball_complement(const ChartBox& box, double radius);    // C^n minus the closed ball

struct ProbeVerdict {
    std::string probe;
    std::string verdict;  // consistent | violation | no_contact | first_contact | pass | fail | skipped
    std::optional<CPoint> witness;
    std::string reason;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json margins = nlohmann::json::object();

    bool is(const char* v) const { return verdict == v; }
};

nlohmann::json to_json(const ProbeVerdict& v);

struct ProbeCounts {
    int surface = 4096;
    int filled = 4096;
    std::uint64_t seed = 0;
};

ProbeVerdict hat_fill_probe(const DomainSpec& omega, const HatPair& pair, int q, const ProbeCounts& counts = {});
// Re-checks a violation witness exactly.
bool reverify_hat_violation(const DomainSpec& omega, const HatPair& pair, const ProbeVerdict& v);

struct DiscFamily {
    CPoint base;  // p = (p_1, p', p'')
    int q = 1;
    int t_steps = 64;
    int disc_samples = 256;

    double t0() const { return base.x(0); }
    double t1() const;
};

// Points of A_t: z_1 = t + i Im p_1, |z'|^2 < 1 - t^2 - (Im p_1)^2, z'' = p''.
std::vector<CPoint> disc_samples(const DiscFamily& fam, double t, int count, bool boundary);
ProbeVerdict disc_family_sweep(const DomainSpec& omega, const DiscFamily& fam);

ProbeVerdict hartogs_probe(const DomainSpec& omega, const HartogsFigure& fig, const AffineMap& embed, int q,
                           const ProbeCounts& counts = {});
bool reverify_hartogs_violation(const DomainSpec& omega, const HartogsFigure& fig, const AffineMap& embed,
                                const ProbeVerdict& v);

struct BallSpec {
    CPoint center;
    double radius = 0.2;
};

// tau_gap < 0: use the gradient-norm estimate times the voxel diagonal.
ProbeVerdict local_max_check(const VoxelSet& A, const ScalarField& psi, const BallSpec& L, int q,
                             double tau_gap = -1.0);

ProbeVerdict exhaustion_fill_check(const DomainSpec& omega, const ScalarField& rho, const HartogsFigure& fig,
                                   const AffineMap& embed, int q, const ProbeCounts& counts = {});

}  // namespace qnucleus
