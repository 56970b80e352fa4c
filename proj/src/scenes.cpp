#include "qnucleus/scenes.hpp"

#include <algorithm>
#include <cmath>

namespace qnucleus {

std::vector<std::string> catalogue_field_names() {
    return {"norm2", "re_z1_squared", "indefinite", "cp_rho", "psi_r", "ball_exhaustion", "re_z2", "neg_norm2"};
}

namespace {

ScalarField field_norm2(int n, double sign) {
    ScalarField f;
    f.name = sign > 0 ? "norm2" : "neg_norm2";
    f.n = n;
    f.value = [sign](const CPoint& p) { return sign * p.norm_squared(); };
    f.hessian = [n, sign](const CPoint&) { return HermitianForm(CMatrix::Identity(n, n) * sign); };
    return f;
}

ScalarField field_cp_rho() {
    ScalarField f;
    f.name = "cp_rho";
    f.n = 2;
    f.value = [](const CPoint& p) { return (1.0 + std::norm(p.z(0))) / std::norm(p.z(1)); };
    f.hessian = [](const CPoint& p) {
        const Complex w1 = p.z(0), w2 = p.z(1);
        const double v = std::norm(w2);
        CMatrix L(2, 2);
        L(0, 0) = 1.0 / v;
        L(0, 1) = -std::conj(w1) * w2 / (v * v);
        L(1, 0) = std::conj(L(0, 1));
        L(1, 1) = (1.0 + std::norm(w1)) / (v * v);
        return HermitianForm(L);
    };
    f.domain = [](const CPoint& p) { return std::abs(p.z(1)) > 1e-6; };
    return f;
}

ScalarField field_ball_exhaustion(int n) {
    ScalarField f;
    f.name = "ball_exhaustion";
    f.n = n;
    f.value = [](const CPoint& p) {
        const double s = p.norm_squared();
        return s / (1.0 - s);
    };
    f.hessian = [n](const CPoint& p) {
        const double s = p.norm_squared();
        const double d1 = 1.0 / ((1.0 - s) * (1.0 - s));
        const double d2 = 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s));
        const CVector z = p.to_complex();
        CMatrix L = CMatrix::Identity(n, n) * d1 + d2 * z.conjugate() * z.transpose();
        return HermitianForm(L);
    };
    f.domain = [](const CPoint& p) { return p.norm_squared() < 1.0; };
    return f;
}

}  // namespace

ScalarField catalogue_field(const std::string& name, int n) {
    if (n < 1) throw InputError("field dimension must be >= 1");
    if (name == "norm2") return field_norm2(n, 1.0);
    if (name == "neg_norm2") return field_norm2(n, -1.0);
    if (name == "re_z1_squared") {
        ScalarField f{"re_z1_squared", n, [](const CPoint& p) { return (p.z(0) * p.z(0)).real(); },
                      [n](const CPoint&) { return HermitianForm::zero(n); }, {}};
        return f;
    }
    if (name == "re_z2") {
        if (n < 2) throw InputError("re_z2 needs n >= 2");
        return ScalarField{"re_z2", n, [](const CPoint& p) { return p.x(1); },
                           [n](const CPoint&) { return HermitianForm::zero(n); }, {}};
    }
    if (name == "indefinite") {
        if (n < 2) throw InputError("indefinite field needs n >= 2");
        std::vector<double> d(n, -2.0);
        d[0] = 1.0;
        return ScalarField{"indefinite", n,
                           [](const CPoint& p) {
                               double s = std::norm(p.z(0));
                               for (int j = 1; j < p.dim(); ++j) s -= 2.0 * std::norm(p.z(j));
                               return s;
                           },
                           [d](const CPoint&) { return HermitianForm::diagonal(d); }, {}};
    }
    if (name == "cp_rho") {
        if (n != 2) throw InputError("cp_rho is defined on C^2");
        return field_cp_rho();
    }
    if (name == "psi_r") {
        ScalarField f = hat_bump(HatPair::make(n, 0.5, AffineMap::identity(n)), 1);
        f.name = "psi_r";
        return f;
    }
    if (name == "ball_exhaustion") return field_ball_exhaustion(n);
    throw InputError("unknown field: " + name);
}

// ---------------------------------------------------------------------------

namespace {

// Distance from c to the graph, refined from a starting parameter by Gauss-Newton.
double graph_distance_from(const CPoint& c, Complex zeta) {
    const Complex c1 = c.z(0), c2 = c.z(1);
    auto dist = [&](Complex z) { return std::sqrt(std::norm(z - c1) + std::norm(z * z - c2)); };
    double best = dist(zeta);
    for (int it = 0; it < 30; ++it) {
        const Complex r1 = zeta - c1, r2 = zeta * zeta - c2;
        const Complex da = 2.0 * zeta, db = Complex(0.0, 2.0) * zeta;
        // residual (Re r1, Im r1, Re r2, Im r2); columns for a and b
        const double J[4][2] = {{1, 0}, {0, 1}, {da.real(), db.real()}, {da.imag(), db.imag()}};
        const double R[4] = {r1.real(), r1.imag(), r2.real(), r2.imag()};
        double A00 = 0, A01 = 0, A11 = 0, g0 = 0, g1 = 0;
        for (int i = 0; i < 4; ++i) {
            A00 += J[i][0] * J[i][0];
            A01 += J[i][0] * J[i][1];
            A11 += J[i][1] * J[i][1];
            g0 += J[i][0] * R[i];
            g1 += J[i][1] * R[i];
        }
        const double det = A00 * A11 - A01 * A01;
        if (!(std::abs(det) > 1e-300)) break;
        const double sa = (A11 * g0 - A01 * g1) / det, sb = (A00 * g1 - A01 * g0) / det;
        const Complex next = zeta - Complex(sa, sb);
        const double dn = dist(next);
        if (!(dn < best)) break;
        best = dn;
        zeta = next;
        if (std::abs(sa) + std::abs(sb) < 1e-15) break;
    }
    return best;
}

}  // namespace

VoxelSet graph_neighbourhood(const ChartBox& box, double radius) {
    if (box.dim() != 2) throw InputError("graph neighbourhood needs C^2");
    VoxelSet out(box);
    const double step = 0.25 * std::min(box.width(0), box.width(1));
    const double slack = 3.0 * step;  // sampling error of the graph, refined below
    const double reach = radius + slack;
    std::vector<double> best(static_cast<std::size_t>(box.cell_count()), std::numeric_limits<double>::infinity());
    std::vector<Complex> arg(best.size());
    const double ax0 = box.lower()[0] - reach, ax1 = box.upper()[0] + reach;
    const double ay0 = box.lower()[1] - reach, ay1 = box.upper()[1] + reach;
    const int nx = static_cast<int>(std::ceil((ax1 - ax0) / step)), ny = static_cast<int>(std::ceil((ay1 - ay0) / step));
    std::vector<int> lo(4), hi(4), m(4);
    for (int ix = 0; ix <= nx; ++ix) {
        for (int iy = 0; iy <= ny; ++iy) {
            const Complex zeta(ax0 + ix * step, ay0 + iy * step);
            const CPoint g = CPoint::from_complex({zeta, zeta * zeta});
            bool any = false;
            for (int a = 0; a < 4; ++a) {
                lo[a] = std::max(0, static_cast<int>(std::floor((g[a] - reach - box.lower()[a]) / box.width(a))));
                hi[a] = std::min(box.resolution()[a] - 1,
                                 static_cast<int>(std::floor((g[a] + reach - box.lower()[a]) / box.width(a))));
                if (lo[a] > hi[a]) { any = true; break; }
            }
            if (any) continue;
            m = lo;
            while (true) {
                std::int64_t idx = 0;
                double d2 = 0.0;
                for (int a = 0; a < 4; ++a) {
                    idx += box.stride(a) * m[a];
                    const double e = box.lower()[a] + (m[a] + 0.5) * box.width(a) - g[a];
                    d2 += e * e;
                }
                const double d = std::sqrt(d2);
                if (d < best[idx]) { best[idx] = d; arg[idx] = zeta; }
                int a = 0;
                while (a < 4 && ++m[a] > hi[a]) { m[a] = lo[a]; ++a; }
                if (a == 4) break;
            }
        }
    }
    for (std::int64_t i = 0; i < box.cell_count(); ++i) {
        if (!(best[i] <= reach)) continue;
        const double d = best[i] <= radius ? best[i] : graph_distance_from(box.center(i), arg[i]);
        if (d <= radius) out.set(i);
    }
    return out;
}

}  // namespace qnucleus

namespace qnucleus {

std::vector<std::string> scene_names() {
    return {"ball", "bidisc", "analytic-tube", "cp-chart", "hartogs-violator", "ball-exhaustion"};
}

namespace {

int pick(int requested, int fallback) { return requested > 0 ? requested : fallback; }

Scene scene_ball(int res) {
    Scene s;
    s.name = "ball";
    s.box = ChartBox::cube(2, 2.0, pick(res, 24));
    s.ambient = AmbientDomain::full(s.box);
    s.K = voxelize([](const CPoint& p) { return p.norm_squared() <= 1.0; }, s.box, VoxelizeMode::Centers);
    s.fields["norm2"] = catalogue_field("norm2");
    s.family.order = 2;
    s.omega = domain_ball(s.box, 1.0);
    s.expectations = {{"nucleus empty", "nucleus_empty", {}},
                      {"norm2 is 1-convex on K", "levi_scan", {{"field", "norm2"}, {"q", 1}, {"strict", true}}}};
    return s;
}

Scene scene_bidisc(int res) {
    Scene s;
    s.name = "bidisc";
    s.box = ChartBox::cube(2, 2.0, pick(res, 24));
    s.ambient = AmbientDomain::full(s.box);
    s.K = voxelize([](const CPoint& p) { return std::abs(p.z(0)) <= 0.7 && std::abs(p.z(1)) <= 0.7; }, s.box,
                   VoxelizeMode::Centers);
    s.fields["norm2"] = catalogue_field("norm2");
    s.family.order = 2;
    s.expectations = {{"nucleus empty", "nucleus_empty", {}}};
    return s;
}

Scene scene_tube(int res) {
    Scene s;
    s.name = "analytic-tube";
    s.box = ChartBox::cube(2, 1.0, pick(res, 24));
    s.ambient = AmbientDomain::from_predicate(s.box, [](const CPoint& p) { return p.norm_squared() < 0.95 * 0.95; });
    const double diag = s.box.diagonal();
    s.K = graph_neighbourhood(s.box, 2.0 * diag) & s.ambient.allowed;
    s.graph_cells = graph_neighbourhood(s.box, diag) & s.ambient.allowed;
    s.fields["re_z2"] = catalogue_field("re_z2");
    s.fields["neg_norm2"] = catalogue_field("neg_norm2");
    s.family.order = 2;
    s.family.stride = 4;
    s.family.scales = {0.3, 0.45};
    s.expectations = {{"graph cells survive", "retains_graph", {}}};
    return s;
}

Scene scene_cp_chart(int res) {
    Scene s;
    s.name = "cp-chart";
    const int r = pick(res, 12);
    s.box = ChartBox({-1.0, -1.0, -1.5, -1.5}, {1.0, 1.0, 1.5, 1.5}, {r, r, r, r});
    s.ambient = AmbientDomain::full(s.box);
    s.K = voxelize([](const CPoint& p) {
        const double a = std::abs(p.z(1));
        return a >= 0.5 && a <= 1.5;
    }, s.box, VoxelizeMode::Centers);
    s.fields["rho"] = catalogue_field("cp_rho");
    s.expectations = {
        {"rho is 1-convex on the annulus", "levi_scan", {{"field", "rho"}, {"q", 1}, {"strict", true}}},
        {"signature at (0,1)", "classify", {{"field", "rho"}, {"point", {0.0, 0.0, 1.0, 0.0}}, {"signature", {0, 0, 2}}}},
        {"global projective statement", "documentation_only",
         {{"note", "the nucleus of the whole projective space needs several charts and is not computed"}}}};
    return s;
}

Scene scene_violator(int res) {
    Scene s;
    s.name = "hartogs-violator";
    s.box = ChartBox::cube(2, 2.0, pick(res, 16));
    s.ambient = AmbientDomain::full(s.box);
    s.K = VoxelSet(s.box);
    s.omega = domain_ball_complement(s.box, 1.0);
    s.probe_hat = HatPair::oriented(2, 0.3, CVector::Zero(2), CMatrix::Identity(2, 2), 1.4);
    s.figure = HartogsFigure{1, 1, 0.7, 0.7};
    CMatrix A = CMatrix::Zero(2, 2);
    A(0, 0) = 6.0;  // |w_1| < 0.7 lands in |z_1| > 1.2; w = (0.9, 0) lands on the origin
    A(1, 1) = 2.0;
    CVector b = CVector::Zero(2);
    b[0] = -5.4;
    s.figure_embedding = AffineMap(A, b);
    s.expectations = {{"hat fill violation", "hat_fill_violation", {}},
                      {"Hartogs figure violation", "hartogs_violation", {}}};
    return s;
}

Scene scene_ball_exhaustion(int res) {
    Scene s;
    s.name = "ball-exhaustion";
    s.box = ChartBox::cube(2, 1.0, pick(res, 12));
    s.ambient = AmbientDomain::full(s.box);
    s.K = VoxelSet(s.box);
    s.omega = domain_ball(s.box, 1.0);
    s.fields["rho"] = catalogue_field("ball_exhaustion");
    s.figure = HartogsFigure{1, 1, 0.5, 0.5};
    s.figure_embedding = AffineMap(CMatrix::Identity(2, 2) * 0.6, CVector::Zero(2));
    s.expectations = {{"exhaustion fills the figure", "exhaustion_pass", {}},
                      {"rho is 1-convex on the ball", "levi_scan", {{"field", "rho"}, {"q", 1}, {"strict", true}}}};
    return s;
}

}  // namespace

Scene make_scene(const SceneConfig& config) {
    Scene s;
    const int res = config.resolution;
    if (res < 0) throw InputError("resolution must be positive");
    if (config.name == "ball") s = scene_ball(res);
    else if (config.name == "bidisc") s = scene_bidisc(res);
    else if (config.name == "analytic-tube") s = scene_tube(res);
    else if (config.name == "cp-chart") s = scene_cp_chart(res);
    else if (config.name == "hartogs-violator") s = scene_violator(res);
    else if (config.name == "ball-exhaustion") s = scene_ball_exhaustion(res);
    else throw InputError("unknown scene: " + config.name);
    s.family.seed = config.seed;
    const auto& ov = config.overrides;
    if (ov.is_object()) {
        if (ov.contains("family")) {
            nlohmann::json merged = to_json(s.family);
            merged.merge_patch(ov.at("family"));
            s.family = family_config_from_json(merged);
        }
        if (ov.contains("q")) s.q = ov.at("q").get<int>();
    }
    s.n = s.box.dim();
    return s;
}

Scene make_scene(const std::string& name, int resolution) { return make_scene(SceneConfig{name, resolution, 0, {}}); }

}  // namespace qnucleus

namespace qnucleus {

bool SceneReport::pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

namespace {

const ScalarField& scene_field(const Scene& s, const nlohmann::json& d) {
    const std::string name = d.at("field").get<std::string>();
    auto it = s.fields.find(name);
    if (it == s.fields.end()) throw InputError("scene has no field " + name);
    return it->second;
}

ExpectationResult run_one(const Scene& s, const Expectation& e, const SceneConfig& cfg) {
    ExpectationResult r{e.name, e.kind, false, nlohmann::json::object()};
    const int q = s.q;
    if (e.kind == "nucleus_empty" || e.kind == "retains_graph") {
        HatFamilyConfig fc = s.family;
        fc.seed = cfg.seed;
        const HatFamily fam = generate_family(fc, s.ambient);
        const NucleusResult nr = approximate_nucleus(s.K, q, fam, s.ambient);
        r.detail = {{"K", s.K.count()}, {"family", fam.pairs.size()}, {"residual", nr.residual.count()},
                    {"iterations", nr.iterations}, {"converged", nr.converged},
                    {"cuts", nr.sequence.records.size()}};
        if (e.kind == "nucleus_empty") {
            r.pass = nr.residual.empty();
        } else {
            const VoxelSet lost = *s.graph_cells - nr.residual;
            r.detail["graph_cells"] = s.graph_cells->count();
            r.detail["graph_cells_removed"] = lost.count();
            r.pass = lost.empty() && !nr.residual.empty();
        }
    } else if (e.kind == "levi_scan") {
        ScanOptions so;
        so.q = e.details.value("q", 1);
        so.strict = e.details.value("strict", true);
        const ScalarField& f = scene_field(s, e.details);
        const VoxelSet region = s.omega ? (s.K.empty() ? s.omega->voxelization() : s.K) : s.K;
        const ScanReport sr = scan_region(f, region, so);
        r.detail = to_json(sr);
        r.pass = sr.all_pass() && sr.domain_errors == 0;
    } else if (e.kind == "classify") {
        const ScalarField& f = scene_field(s, e.details);
        const CPoint p(e.details.at("point").get<std::vector<double>>());
        const Signature sig = signature(complex_hessian(f, p), kDefaultTau);
        const auto want = e.details.at("signature").get<std::vector<int>>();
        r.detail = to_json(sig);
        r.pass = sig.n_neg == want.at(0) && sig.n_zero == want.at(1) && sig.n_pos == want.at(2);
    } else if (e.kind == "hat_fill_violation") {
        ProbeCounts pc;
        pc.seed = cfg.seed;
        const ProbeVerdict v = hat_fill_probe(*s.omega, *s.probe_hat, q, pc);
        r.detail = to_json(v);
        r.pass = v.is("violation") && reverify_hat_violation(*s.omega, *s.probe_hat, v);
    } else if (e.kind == "hartogs_violation") {
        ProbeCounts pc;
        pc.seed = cfg.seed;
        const ProbeVerdict v = hartogs_probe(*s.omega, *s.figure, *s.figure_embedding, q, pc);
        r.detail = to_json(v);
        r.pass = v.is("violation") && reverify_hartogs_violation(*s.omega, *s.figure, *s.figure_embedding, v);
    } else if (e.kind == "exhaustion_pass") {
        ProbeCounts pc;
        pc.seed = cfg.seed;
        const ProbeVerdict v =
            exhaustion_fill_check(*s.omega, s.fields.at("rho"), *s.figure, *s.figure_embedding, q, pc);
        r.detail = to_json(v);
        r.pass = v.is("pass");
    } else if (e.kind == "documentation_only") {
        r.detail = e.details;
        r.pass = true;
    } else {
        throw InputError("unknown expectation kind " + e.kind);
    }
    return r;
}

}  // namespace

SceneReport run_expectations(const Scene& scene, const SceneConfig& config) {
    SceneReport rep{scene.name, {}};
    for (const auto& e : scene.expectations) rep.results.push_back(run_one(scene, e, config));
    return rep;
}

nlohmann::json to_json(const SceneReport& r) {
    nlohmann::json res = nlohmann::json::array();
    for (const auto& e : r.results)
        res.push_back({{"name", e.name}, {"kind", e.kind}, {"pass", e.pass}, {"detail", e.detail}});
    return {{"scene", r.scene}, {"pass", r.pass()}, {"expectations", res}};
}

SceneConfig scene_config_from_json(const nlohmann::json& j) {
    SceneConfig c;
    try {
        c.name = j.at("name").get<std::string>();
        c.resolution = j.value("resolution", 0);
        c.seed = j.value("seed", std::uint64_t{0});
        c.overrides = j.value("overrides", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed scene config: ") + e.what());
    }
    return c;
}

}  // namespace qnucleus
