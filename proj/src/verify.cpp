#include "qnucleus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnucleus/levi.hpp"
#include "qnucleus/sampling.hpp"

namespace qnucleus {

namespace {

constexpr double kPi = 3.14159265358979323846;

nlohmann::json hat_params(const HatPair& pair) { return to_json(pair); }

ProbeVerdict make(const char* probe, const char* verdict, std::string reason = {}) {
    ProbeVerdict v;
    v.probe = probe;
    v.verdict = verdict;
    v.reason = std::move(reason);
    return v;
}

// Uniform-ish point of the unit polydisc from 2n numbers in (0, 1).
CVector polydisc_point(const std::vector<double>& u, int n) {
    CVector w(n);
    for (int j = 0; j < n; ++j) w[j] = std::polar(std::sqrt(u[2 * j]) * (1.0 - 1e-12), 2.0 * kPi * u[2 * j + 1]);
    return w;
}

}  // namespace

DomainSpec domain_everything(const ChartBox& box) {
    return {"everything", [](const CPoint&) { return true; }, box};
}

DomainSpec domain_ball(const ChartBox& box, double radius) {
    return {"ball", [radius](const CPoint& p) { return p.norm_squared() < radius * radius; }, box};
}

DomainSpec domain_ball_complement(const ChartBox& box, double radius) {
    return {"ball_complement", [radius](const CPoint& p) { return p.norm_squared() > radius * radius; }, box};
}

nlohmann::json to_json(const ProbeVerdict& v) {
    nlohmann::json j{{"probe", v.probe}, {"params", v.params}, {"verdict", v.verdict}, {"margins", v.margins}};
    j["witness"] = v.witness ? nlohmann::json(v.witness->coords()) : nlohmann::json(nullptr);
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

// ---------------------------------------------------------------------------

ProbeVerdict hat_fill_probe(const DomainSpec& omega, const HatPair& pair, int q, const ProbeCounts& counts) {
    const int n = pair.n();
    if (q < 1 || q > n || pair.k != n - q + 1) throw OrderError("hat order must equal n - q + 1");
    ProbeVerdict v = make("hat_fill", "consistent");
    v.params = {{"hat", hat_params(pair)}, {"q", q}, {"surface_samples", counts.surface},
                {"filled_samples", counts.filled}, {"seed", counts.seed}};
    int checked = 0;
    for (const auto& p : sample_S(pair, counts.surface, counts.seed)) {
        if (!omega(p)) {
            v.reason = "surface not contained in the domain";
            v.margins = {{"surface_checked", checked + 1}, {"filled_checked", 0}};
            return v;
        }
        ++checked;
    }
    int filled = 0;
    for (const auto& p : sample_filled(pair, counts.filled, counts.seed)) {
        ++filled;
        if (!omega(p)) {
            v.verdict = "violation";
            v.witness = p;
            v.reason = "filled hat leaves the domain while its surface stays inside";
            break;
        }
    }
    v.margins = {{"surface_checked", checked}, {"filled_checked", filled}};
    return v;
}

bool reverify_hat_violation(const DomainSpec& omega, const HatPair& pair, const ProbeVerdict& v) {
    if (!v.is("violation") || !v.witness) return false;
    return hat_membership(pair, *v.witness) != HatRegion::Outside && !omega(*v.witness);
}

// ---------------------------------------------------------------------------

double DiscFamily::t1() const {
    const double im = base.y(0);
    return std::sqrt(std::max(0.0, 1.0 - im * im));
}

std::vector<CPoint> disc_samples(const DiscFamily& fam, double t, int count, bool boundary) {
    const int n = fam.base.dim();
    const int kp = n - fam.q;  // size of z'
    const double im = fam.base.y(0);
    const double rad2 = 1.0 - t * t - im * im;
    std::vector<CPoint> out;
    if (rad2 < 0.0 || count < 1) return out;
    const double rad = std::sqrt(rad2);
    CPoint p = fam.base;
    p.set_z(0, Complex(t, im));
    for (int j = 1; j <= kp; ++j) p.set_z(j, 0.0);
    if (!boundary) out.push_back(p);  // center of the disc
    if (kp == 0) {
        if (boundary && out.empty()) out.push_back(p);
        return out;
    }
    Halton h(2 * kp + 1, 11);
    while (static_cast<int>(out.size()) < count) {
        const auto u = h.next();
        CVector g(kp);
        for (int j = 0; j < kp; ++j) {
            const double r = std::sqrt(-2.0 * std::log(u[2 * j]));
            g[j] = std::polar(r, 2.0 * kPi * u[2 * j + 1]);
        }
        const double nrm = g.norm();
        if (nrm == 0.0) continue;
        const double len = boundary ? rad : rad * std::pow(u[2 * kp], 1.0 / (2.0 * kp)) * (1.0 - 1e-12);
        CPoint s = p;
        for (int j = 0; j < kp; ++j) s.set_z(1 + j, g[j] * (len / nrm));
        out.push_back(s);
    }
    return out;
}

ProbeVerdict disc_family_sweep(const DomainSpec& omega, const DiscFamily& fam) {
    const int n = fam.base.dim();
    if (fam.q < 1 || fam.q > n - 1) throw InputError("disc family needs 1 <= q <= n - 1");
    const double im = fam.base.y(0);
    if (!(im * im < 1.0)) throw InputError("disc family needs (Im p_1)^2 < 1");
    ProbeVerdict v = make("disc_sweep", "no_contact");
    const double t0 = fam.t0(), t1 = fam.t1();
    v.params = {{"base", fam.base.coords()}, {"q", fam.q}, {"t0", t0}, {"t1", t1}, {"t_steps", fam.t_steps},
                {"disc_samples", fam.disc_samples}};
    if (!(t0 < t1) || fam.t_steps < 1) {
        v.reason = "degenerate t-range";
        return v;
    }
    const int steps = std::max(2, fam.t_steps);
    std::vector<double> ts(steps);
    for (int i = 0; i < steps; ++i) ts[i] = t1 - (t1 - t0) * i / (steps - 1);
    for (double t : ts)
        for (const auto& p : disc_samples(fam, t, std::max(8, fam.disc_samples / 4), true))
            if (!omega(p)) throw InputError("disc boundary leaves the domain; sweep hypothesis fails");
    for (int i = 0; i < steps; ++i) {
        for (const auto& p : disc_samples(fam, ts[i], fam.disc_samples, false)) {
            if (!omega(p)) {
                v.verdict = "first_contact";
                v.witness = p;
                v.margins = {{"t_star", ts[i]}, {"step", (t1 - t0) / (steps - 1)}, {"index", i}};
                return v;
            }
        }
    }
    v.margins = {{"step", (t1 - t0) / (steps - 1)}};
    return v;
}

// ---------------------------------------------------------------------------

ProbeVerdict hartogs_probe(const DomainSpec& omega, const HartogsFigure& fig, const AffineMap& embed, int q,
                           const ProbeCounts& counts) {
    fig.validate();
    const int n = fig.k + fig.m;
    if (embed.dim() != n) throw InputError("embedding dimension does not match the figure");
    if (fig.k != q || fig.m != n - q) throw PreconditionError("Hartogs probe needs k = q and m = n - q");
    ProbeVerdict v = make("hartogs", "consistent");
    v.params = {{"k", fig.k}, {"m", fig.m}, {"r", fig.r}, {"s", fig.s}, {"q", q},
                {"samples", counts.surface}, {"seed", counts.seed}};
    Halton h(2 * n, counts.seed);
    int got = 0;
    for (std::int64_t draw = 0; got < counts.surface && draw < std::int64_t{counts.surface} * 1000; ++draw) {
        const CVector w = polydisc_point(h.next(), n);
        const CPoint p = CPoint::from_complex(w);
        if (!hartogs_membership(fig, p)) continue;
        ++got;
        if (!omega(embed.apply(p))) {
            v.reason = "figure not contained in the domain";
            v.margins = {{"figure_checked", got}, {"polydisc_checked", 0}};
            return v;
        }
    }
    Halton h2(2 * n, counts.seed + 1);
    int checked = 0;
    for (int s = 0; s < counts.filled; ++s) {
        const CVector w = s == 0 ? CVector(CVector::Zero(n)) : polydisc_point(h2.next(), n);
        const CPoint p = embed.apply(CPoint::from_complex(w));
        ++checked;
        if (!omega(p)) {
            v.verdict = "violation";
            v.witness = p;
            v.reason = "polydisc leaves the domain while the figure stays inside";
            break;
        }
    }
    v.margins = {{"figure_checked", got}, {"polydisc_checked", checked}};
    return v;
}

bool reverify_hartogs_violation(const DomainSpec& omega, const HartogsFigure& fig, const AffineMap& embed,
                                const ProbeVerdict& v) {
    if (!v.is("violation") || !v.witness) return false;
    const CPoint w = embed.apply_inverse(*v.witness);
    for (int j = 0; j < w.dim(); ++j)
        if (!(std::abs(w.z(j)) < 1.0)) return false;
    return !omega(*v.witness);
}

}  // namespace qnucleus

namespace qnucleus {

namespace {

double gradient_norm(const ScalarField& f, const CPoint& p, double h) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        CPoint hi = p, lo = p;
        hi[a] += h;
        lo[a] -= h;
        const double d = (f(hi) - f(lo)) / (2.0 * h);
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

ProbeVerdict local_max_check(const VoxelSet& A, const ScalarField& psi, const BallSpec& L, int q, double tau_gap) {
    const ChartBox& box = A.box();
    const VoxelSet Lvox = voxelize([&](const CPoint& p) { return distance(p, L.center) <= L.radius; },
                                   box, VoxelizeMode::Centers);
    ProbeVerdict v = make("local_max", "pass");
    v.params = {{"center", L.center.coords()}, {"radius", L.radius}, {"q", q}};
    const double minus_inf = -std::numeric_limits<double>::infinity();

    const VoxelSet near = dilate(A) & Lvox;
    if (!near.empty()) {
        ScanOptions so;
        so.q = q;
        so.strict = false;
        const ScanReport scan = scan_region(psi, near, so);
        if (scan.fail > 0 || scan.domain_errors > 0) {
            v.verdict = "skipped";
            v.reason = "function is not weakly q-convex near A within L";
            v.margins = {{"scan_fail", scan.fail}, {"scan_domain_errors", scan.domain_errors}};
            return v;
        }
    }
    const VoxelSet inside = A & Lvox;
    const VoxelSet rim = A & boundary(Lvox);
    double max_in = minus_inf, max_rim = minus_inf;
    std::optional<CPoint> arg_in;
    inside.for_each([&](std::int64_t i) {
        const CPoint c = box.center(i);
        const double val = psi(c);
        if (val > max_in) { max_in = val; arg_in = c; }
    });
    rim.for_each([&](std::int64_t i) { max_rim = std::max(max_rim, psi(box.center(i))); });

    if (tau_gap < 0.0) {
        double lip = 0.0;
        Lvox.for_each([&](std::int64_t i) { lip = std::max(lip, gradient_norm(psi, box.center(i), kDefaultStep)); });
        tau_gap = lip * box.diagonal();
    }
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(x > 0 ? "inf" : "-inf"); };
    v.margins = {{"interior_max", num(max_in)}, {"boundary_max", num(max_rim)}, {"tau_gap", tau_gap},
                 {"interior_cells", inside.count()}, {"boundary_cells", rim.count()}};
    if (inside.empty()) return v;  // both maxima are -inf
    if (!(max_in <= max_rim + tau_gap)) {
        v.verdict = "fail";
        v.witness = arg_in;
        v.reason = "interior maximum exceeds the boundary maximum";
    }
    return v;
}

ProbeVerdict exhaustion_fill_check(const DomainSpec& omega, const ScalarField& rho, const HartogsFigure& fig,
                                   const AffineMap& embed, int q, const ProbeCounts& counts) {
    fig.validate();
    const int n = fig.k + fig.m;
    if (embed.dim() != n || rho.n != n) throw InputError("dimensions do not match");
    ProbeVerdict v = make("exhaustion_fill", "pass");
    v.params = {{"k", fig.k}, {"m", fig.m}, {"r", fig.r}, {"s", fig.s}, {"q", q},
                {"samples", counts.surface}, {"seed", counts.seed}};
    if (q < 1 || q > n - 1) throw InputError("exhaustion check needs 1 <= q <= n - 1");

    const VoxelSet omega_vox = omega.voxelization();
    if (omega_vox.empty()) {
        v.verdict = "skipped";
        v.reason = "domain has no voxels in the box";
        return v;
    }
    ScanOptions so;
    so.q = n - q;
    so.strict = true;
    const ScanReport scan = scan_region(rho, omega_vox, so);
    if (scan.fail > 0 || scan.domain_errors > 0) {
        v.verdict = "skipped";
        v.reason = "rho is not (n-q)-convex on the domain";
        v.margins = {{"scan_fail", scan.fail}};
        return v;
    }
    // Exhaustion on the box only: values on the rim of the voxelized domain must
    // exceed the interior minimum.
    const ChartBox& box = omega.box;
    double min_all = std::numeric_limits<double>::infinity(), min_rim = min_all;
    omega_vox.for_each([&](std::int64_t i) { min_all = std::min(min_all, rho(box.center(i))); });
    boundary(omega_vox).for_each([&](std::int64_t i) { min_rim = std::min(min_rim, rho(box.center(i))); });
    v.margins["rho_min"] = min_all;
    v.margins["rho_min_rim"] = min_rim;
    if (!(min_rim > min_all)) {
        v.verdict = "skipped";
        v.reason = "rho does not exhaust the domain on the box";
        return v;
    }

    Halton h(2 * n, counts.seed);
    double cmax = -std::numeric_limits<double>::infinity();
    int got = 0;
    for (std::int64_t draw = 0; got < counts.surface && draw < std::int64_t{counts.surface} * 1000; ++draw) {
        const CVector w = polydisc_point(h.next(), n);
        const CPoint m = CPoint::from_complex(w);
        if (!hartogs_membership(fig, m)) continue;
        ++got;
        const CPoint p = embed.apply(m);
        if (!omega(p)) {
            v.verdict = "skipped";
            v.reason = "figure not contained in the domain";
            return v;
        }
        cmax = std::max(cmax, rho(p));
    }
    Halton h2(2 * n, counts.seed + 1);
    std::vector<CPoint> rest;
    for (int s = 0; s < counts.filled; ++s) {
        const CVector w = s == 0 ? CVector(CVector::Zero(n)) : polydisc_point(h2.next(), n);
        const CPoint m = CPoint::from_complex(w);
        const CPoint p = embed.apply(m);
        if (hartogs_membership(fig, m) && omega(p)) cmax = std::max(cmax, rho(p));
        else rest.push_back(p);
    }
    const double c = cmax + 1e-9 * std::max(1.0, std::abs(cmax));
    double worst = -std::numeric_limits<double>::infinity();
    for (const CPoint& p : rest) {
        if (!omega(p)) {
            v.verdict = "fail";
            v.witness = p;
            v.reason = "polydisc leaves the domain";
            break;
        }
        const double val = rho(p);
        worst = std::max(worst, val);
        if (!(val < c)) {
            v.verdict = "fail";
            v.witness = p;
            v.reason = "maximum on the polydisc exceeds the figure bound";
            break;
        }
    }
    v.margins["c"] = c;
    v.margins["polydisc_max"] = worst;
    return v;
}

}  // namespace qnucleus
