#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qnucleus/field.hpp"
#include "qnucleus/hats.hpp"
#include "qnucleus/levi.hpp"

namespace qnucleus {

struct BumpParams {
    double growth = 4.0;             // K_g
    double offset = 4.0;             // M_b
    double validation_radius = 2.0;  // R_v

    void validate() const;
};

inline constexpr double kExclusionRadius = 1e-6;

struct ThetaValues {
    double value = 0.0, d1 = 0.0, d2 = 0.0;
};

double theta(double t, double growth);
ThetaValues theta_derivatives(double t, double growth);

// phi~ on C^m, flat on Re z_1 <= 0.
double phi_tilde(const CVector& z, const BumpParams& params);
HermitianForm phi_tilde_hessian(const CVector& z, const BumpParams& params);
// First Wirtinger derivatives d phi~ / d z_j.
CVector phi_tilde_gradient(const CVector& z, const BumpParams& params);

// Sufficient condition for strict plurisubharmonicity of phi~ at z:
// theta theta'' (M + |z|^2) > theta'^2 |z|^2. Re z_1 must be > 0.
bool phi_tilde_domination(const CVector& z, const BumpParams& params);

// Model-coordinate bump: z = (z', z''), z' of size n - q + 1.
double psi_r(const CVector& z, double r, int q, const BumpParams& params);
HermitianForm psi_r_hessian(const CVector& z, double r, int q, const BumpParams& params);

// phi = psi_r o Phi^{-1}, undefined within kExclusionRadius of S.
ScalarField hat_bump(const HatPair& pair, int q, const BumpParams& params = {});

struct ParamCertificate {
    BumpParams params;
    int escalations = 0;
    bool certified = false;
    int samples = 0;
    double min_eigenvalue = 0.0;
    std::vector<std::string> log;
};

// Sampled check of phi~'s strict plurisubharmonicity on Re z_1 in (0.05, R_v], |z| <= R_v,
// escalating M_b, then K_g, then shrinking R_v.
ParamCertificate certify_params(int m, BumpParams params, int samples = 2000, std::uint64_t seed = 0);

struct BumpCheck {
    std::string name;
    bool pass = true;
    std::int64_t samples = 0;
    std::int64_t failures = 0;
    double margin = 0.0;  // worst observed value of the checked quantity
    std::vector<CPoint> witnesses;
};

struct BumpReport {
    std::vector<BumpCheck> checks;  // a: vanish outside, b: positive inside, c: weak, d: strict
    std::int64_t grid_points = 0;
    std::int64_t excluded = 0;
    std::int64_t flagged_marginal = 0;  // interior points passing only under the scaled tolerance
    bool pass() const;
};

struct BumpValidationOptions {
    int cells_per_axis = 33;
    double tau = kDefaultTau;
    int max_witnesses = 5;
};

// Samples voxel centers of a grid over the hat's bounding box.
BumpReport validate_bump(const ScalarField& field, const HatPair& pair, int q,
                         const BumpValidationOptions& opt = {});
ChartBox hat_bounding_box(const HatPair& pair, int cells_per_axis);

nlohmann::json to_json(const BumpParams& p);
BumpParams bump_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BumpReport& r);

}  // namespace qnucleus
