#include "qnucleus/bump.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qnucleus {

void BumpParams::validate() const {
    if (!(growth > 0.0 && offset > 0.0 && validation_radius > 0.0))
        throw InputError("bump parameters K_g, M_b, R_v must be positive");
}

double theta(double t, double growth) {
    if (t <= 0.0) return 0.0;
    return std::exp(growth * t - 1.0 / t);
}

ThetaValues theta_derivatives(double t, double growth) {
    if (t <= 0.0) return {};
    const double th = theta(t, growth);
    const double g1 = growth + 1.0 / (t * t);
    const double g2 = -2.0 / (t * t * t);
    return {th, th * g1, th * (g1 * g1 + g2)};
}

double phi_tilde(const CVector& z, const BumpParams& p) {
    const double th = theta(z[0].real(), p.growth);
    if (th == 0.0) return 0.0;
    return th * (p.offset + z.squaredNorm());
}

CVector phi_tilde_gradient(const CVector& z, const BumpParams& p) {
    const ThetaValues t = theta_derivatives(z[0].real(), p.growth);
    CVector g = t.value * z.conjugate();
    g[0] += 0.5 * t.d1 * (p.offset + z.squaredNorm());
    return g;
}

HermitianForm phi_tilde_hessian(const CVector& z, const BumpParams& p) {
    const int m = static_cast<int>(z.size());
    const ThetaValues t = theta_derivatives(z[0].real(), p.growth);
    const double u = p.offset + z.squaredNorm();
    CMatrix L = CMatrix::Identity(m, m) * t.value;
    L(0, 0) += 0.25 * t.d2 * u;
    for (int k = 0; k < m; ++k) {
        L(0, k) += 0.5 * t.d1 * z[k];
        L(k, 0) += 0.5 * t.d1 * std::conj(z[k]);
    }
    return HermitianForm(L);
}

bool phi_tilde_domination(const CVector& z, const BumpParams& p) {
    const ThetaValues t = theta_derivatives(z[0].real(), p.growth);
    const double nz = z.squaredNorm();
    return t.value * t.d2 * (p.offset + nz) > t.d1 * t.d1 * nz;
}

namespace {

int head_size(int n, int q) {
    if (q < 1 || q > n) throw OrderError("q must lie in [1, n]");
    return n - q + 1;
}

bool in_filling_interior(const CVector& z, int m, double r) {
    if (!(z[0].real() > r)) return false;
    if (!(z.head(m).squaredNorm() < 1.0)) return false;
    for (int j = m; j < z.size(); ++j)
        if (!(std::abs(z[j]) < 1.0)) return false;
    return true;
}

}  // namespace

double psi_r(const CVector& z, double r, int q, const BumpParams& p) {
    const int n = static_cast<int>(z.size());
    const int m = head_size(n, q);
    if (!in_filling_interior(z, m, r)) return 0.0;
    CVector zp = z.head(m);
    zp[0] -= r;
    return (1.0 - z.tail(n - m).squaredNorm()) * phi_tilde(zp, p);
}

HermitianForm psi_r_hessian(const CVector& z, double r, int q, const BumpParams& p) {
    const int n = static_cast<int>(z.size());
    const int m = head_size(n, q);
    if (!in_filling_interior(z, m, r)) return HermitianForm::zero(n);
    CVector zp = z.head(m);
    zp[0] -= r;
    const CVector zpp = z.tail(n - m);
    const double a = 1.0 - zpp.squaredNorm();
    const double f = phi_tilde(zp, p);
    const CVector grad = phi_tilde_gradient(zp, p);
    CMatrix L = CMatrix::Zero(n, n);
    L.topLeftCorner(m, m) = a * phi_tilde_hessian(zp, p).matrix();
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < n - m; ++k) {
            L(j, m + k) = -grad[j] * zpp[k];
            L(m + k, j) = std::conj(L(j, m + k));
        }
    for (int k = 0; k < n - m; ++k) L(m + k, m + k) = -f;
    return HermitianForm(L);
}

ScalarField hat_bump(const HatPair& pair, int q, const BumpParams& params) {
    const int n = pair.n();
    if (q < 1 || q > n || pair.k != n - q + 1) throw OrderError("hat order must equal n - q + 1");
    params.validate();
    const AffineMap phi = pair.embedding;
    const double r = pair.r;
    const int k = pair.k;
    ScalarField f;
    f.name = "hat_bump";
    f.n = n;
    f.value = [=](const CPoint& p) { return psi_r(phi.apply_inverse(p.to_complex()), r, q, params); };
    f.hessian = [=](const CPoint& p) {
        const CMatrix& B = phi.inverse_linear();
        const HermitianForm L = psi_r_hessian(phi.apply_inverse(p.to_complex()), r, q, params);
        return HermitianForm(B.transpose() * L.matrix() * B.conjugate());
    };
    f.domain = [=](const CPoint& p) {
        const CVector w = phi.apply_inverse(p.to_complex());
        return phi.sigma_min() * model_distance_to_cap(k, r, w) > kExclusionRadius;
    };
    return f;
}

ParamCertificate certify_params(int m, BumpParams params, int samples, std::uint64_t seed) {
    if (m < 1) throw InputError("dimension must be >= 1");
    params.validate();
    ParamCertificate cert;
    for (int attempt = 0; attempt <= 6; ++attempt) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double R = params.validation_radius;
        const double lo = std::min(0.05, 0.5 * R);
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (int s = 0; s < samples; ++s) {
            CVector z(m);
            z[0] = Complex(lo + (R - lo) * uni(rng), 0.0);
            for (int j = 0; j < m; ++j) {
                const Complex g(gauss(rng), gauss(rng));
                if (j == 0) z[0] += Complex(0.0, g.imag()); else z[j] = g;
            }
            // scale the remaining coordinates into the ball of radius R
            const double x = z[0].real();
            const double rest = std::sqrt(std::max(0.0, z.squaredNorm() - x * x));
            const double room = std::sqrt(std::max(0.0, R * R - x * x));
            const double target = room * std::pow(uni(rng), 1.0 / std::max(1, 2 * m - 1));
            if (rest > 0.0) {
                const double f = target / rest;
                z[0] = Complex(x, z[0].imag() * f);
                for (int j = 1; j < m; ++j) z[j] *= f;
            }
            const Signature sig = signature(phi_tilde_hessian(z, params), kDefaultTau);
            worst = std::min(worst, sig.eigenvalues.front());
            if (sig.eigenvalues.front() <= 0.0 || !phi_tilde_domination(z, params)) ok = false;
        }
        cert.samples += samples;
        cert.min_eigenvalue = worst;
        if (ok) {
            cert.params = params;
            cert.certified = true;
            return cert;
        }
        if (attempt == 6) break;
        ++cert.escalations;
        if (cert.escalations <= 2) {
            params.offset *= 2.0;
            cert.log.push_back("doubled M_b");
        } else if (cert.escalations <= 4) {
            params.growth *= 2.0;
            cert.log.push_back("doubled K_g");
        } else {
            params.validation_radius *= 0.5;
            cert.log.push_back("halved R_v");
        }
    }
    cert.params = params;
    cert.certified = false;
    return cert;
}

}  // namespace qnucleus

namespace qnucleus {

bool BumpReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ChartBox hat_bounding_box(const HatPair& pair, int cells_per_axis) {
    if (cells_per_axis < 1) throw InputError("cells per axis must be >= 1");
    std::vector<double> lo, hi;
    neighbourhood_bounds(pair, lo, hi);
    for (std::size_t a = 0; a < lo.size(); ++a) {
        const double pad = 0.1 * (hi[a] - lo[a]);
        lo[a] -= pad;
        hi[a] += pad;
    }
    return ChartBox(lo, hi, std::vector<int>(lo.size(), cells_per_axis));
}

namespace {

void note_failure(BumpCheck& c, const CPoint& p, int max_witnesses) {
    ++c.failures;
    c.pass = false;
    if (static_cast<int>(c.witnesses.size()) < max_witnesses) c.witnesses.push_back(p);
}

}  // namespace

BumpReport validate_bump(const ScalarField& field, const HatPair& pair, int q, const BumpValidationOptions& opt) {
    const int n = pair.n();
    if (field.n != n) throw InputError("field dimension does not match the hat");
    if (q < 1 || q > n) throw OrderError("q must lie in [1, n]");
    const ChartBox box = hat_bounding_box(pair, opt.cells_per_axis);
    HatGeometry geo(pair, box);

    BumpReport rep;
    BumpCheck a{"vanishes_outside", true, 0, 0, 0.0, {}};
    BumpCheck b{"positive_on_interior_voxels", true, 0, 0, std::numeric_limits<double>::infinity(), {}};
    BumpCheck c{"weakly_q_convex_off_S", true, 0, 0, std::numeric_limits<double>::infinity(), {}};
    BumpCheck d{"strictly_q_convex_on_filling", true, 0, 0, std::numeric_limits<double>::infinity(), {}};

    std::vector<double> buf(box.axes());
    for (std::int64_t i = 0; i < box.cell_count(); ++i) {
        ++rep.grid_points;
        box.center(i, buf.data());
        const CPoint p(buf);
        if (!field.defined_at(p)) { ++rep.excluded; continue; }
        const double v = field.value(p);
        const HatRegion region = hat_membership(pair, p);
        if (region == HatRegion::Outside) {
            ++a.samples;
            a.margin = std::max(a.margin, std::abs(v));
            if (!(std::abs(v) <= 1e-12)) note_failure(a, p, opt.max_witnesses);
        }
        if (geo.interior_cell(i)) {
            ++b.samples;
            b.margin = std::min(b.margin, v);
            if (!(v > 0.0)) note_failure(b, p, opt.max_witnesses);
        }
        const HermitianForm H = field.has_hessian() ? field.hessian(p) : complex_hessian(field, p);
        const Signature sig = signature(H, opt.tau);
        const double lam_q = sig.eigenvalues[q - 1];
        ++c.samples;
        c.margin = std::min(c.margin, lam_q);
        if (sig.n_neg > q - 1) note_failure(c, p, opt.max_witnesses);
        if (region == HatRegion::Interior) {
            ++d.samples;
            // Strictness is judged relative to the local size of the field, which
            // is scale invariant; values near the flat face are tiny.
            const double tau_eff = opt.tau * std::min(1.0, std::abs(v));
            d.margin = std::min(d.margin, lam_q);
            if (!(lam_q > tau_eff)) note_failure(d, p, opt.max_witnesses);
            else if (!(lam_q > opt.tau)) ++rep.flagged_marginal;
        }
    }
    for (BumpCheck* ch : {&b, &c, &d})
        if (ch->samples == 0) ch->margin = 0.0;
    rep.checks = {a, b, c, d};
    return rep;
}

nlohmann::json to_json(const BumpParams& p) {
    return {{"K_g", p.growth}, {"M_b", p.offset}, {"R_v", p.validation_radius}};
}

BumpParams bump_params_from_json(const nlohmann::json& j) {
    BumpParams p;
    try {
        p.growth = j.value("K_g", p.growth);
        p.offset = j.value("M_b", p.offset);
        p.validation_radius = j.value("R_v", p.validation_radius);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed bump parameters: ") + e.what());
    }
    p.validate();
    return p;
}

nlohmann::json to_json(const BumpReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& p : c.witnesses) w.push_back(p.coords());
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"samples", c.samples},
                          {"failures", c.failures},
                          {"margin", c.margin},
                          {"witnesses", w}});
    }
    return {{"pass", r.pass()},
            {"grid_points", r.grid_points},
            {"excluded", r.excluded},
            {"flagged_marginal", r.flagged_marginal},
            {"checks", checks}};
}

}  // namespace qnucleus
