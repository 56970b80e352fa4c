#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "qnucleus/field.hpp"

namespace qnucleus {

inline constexpr double kDefaultTau = 1e-7;
inline constexpr double kDefaultStep = 1e-3;

struct Signature {
    int n_neg = 0;
    int n_zero = 0;
    int n_pos = 0;
    double tau = kDefaultTau;
    std::vector<double> eigenvalues;  // ascending

    int dim() const { return n_neg + n_zero + n_pos; }
    bool operator==(const Signature& o) const {
        return n_neg == o.n_neg && n_zero == o.n_zero && n_pos == o.n_pos;
    }
};

// Smallest q for which the Levi form passes; n + 1 means "fails even q = n".
struct ConvexityClass {
    int q_min_strict = 1;
    int q_min_weak = 1;
    bool operator==(const ConvexityClass&) const = default;
};

struct LeviOptions {
    double tau = kDefaultTau;
    double step = kDefaultStep;
};

// Central-difference complex Hessian; DomainError if the stencil leaves the domain.
HermitianForm finite_difference_hessian(const ScalarField& field, const CPoint& p, double step);

// Analytic Hessian when the field carries one, finite differences otherwise
// (or always, when force_finite_difference is set).
HermitianForm complex_hessian(const ScalarField& field, const CPoint& p, double step = kDefaultStep,
                              bool force_finite_difference = false);

Signature signature(const HermitianForm& form, double tau);
ConvexityClass convexity_class(const Signature& s);

ConvexityClass classify_point(const ScalarField& field, const CPoint& p, const LeviOptions& opt = {});

// Worst class over the branches within eps_active of the max.
ConvexityClass classify_max_point(const MaxField& mf, const CPoint& p, const LeviOptions& opt = {},
                                  double eps_active = 1e-6);

struct ScanOptions {
    int q = 1;
    bool strict = true;
    LeviOptions levi;
    int jitter_per_voxel = 0;
    std::uint64_t seed = 0;
    bool record_points = false;
};

struct ScanPoint {
    CPoint point;
    std::vector<double> eigenvalues;
    Signature signature;
    bool pass = false;
};

struct ScanReport {
    std::int64_t points_scanned = 0;
    std::int64_t pass = 0;
    std::int64_t fail = 0;
    std::int64_t domain_errors = 0;
    std::optional<ScanPoint> worst;
    std::vector<ScanPoint> rows;

    bool all_pass() const { return fail == 0 && points_scanned > 0; }
};

ScanReport scan_region(const ScalarField& field, const VoxelSet& region, const ScanOptions& opt);
ScanReport scan_region(const MaxField& field, const VoxelSet& region, const ScanOptions& opt);

nlohmann::json to_json(const Signature& s);
nlohmann::json to_json(const ScanReport& r);
// Per-point eigenvalue CSV with header row; '.' decimals, '\n' endings.
std::string scan_csv(const ScanReport& r);

}  // namespace qnucleus
