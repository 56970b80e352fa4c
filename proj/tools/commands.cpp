#include "commands.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

#include "qnucleus/glue.hpp"
#include "qnucleus/io.hpp"
#include "qnucleus/scenes.hpp"

namespace qcli {

using namespace qnucleus;

namespace {

// Everything but the output location, so reruns into other directories stay byte-identical.
json recorded_config(const json& cfg) {
    json c = cfg;
    c.erase("out");
    return c;
}

SceneConfig scene_config(const json& cfg) {
    SceneConfig sc;
    sc.name = cfg.at("scene").get<std::string>();
    sc.resolution = cfg.at("resolution").get<int>();
    sc.seed = cfg.at("seed").get<std::uint64_t>();
    sc.overrides = json::object();
    if (!cfg.at("family").empty()) sc.overrides["family"] = cfg.at("family");
    if (!cfg.at("q").is_null()) sc.overrides["q"] = cfg.at("q");
    return sc;
}

Scene load_scene(const json& cfg) {
    Scene s = make_scene(scene_config(cfg));
    if (s.q < 1 || s.q > s.n - 1) throw InputError("q must lie in [1, n-1]");
    return s;
}

json header(const json& cfg, const Scene& s, const char* command) {
    return {{"command", command}, {"scene", s.name}, {"seed", cfg.at("seed")}, {"q", s.q},
            {"config", recorded_config(cfg)}};
}

ScalarField pick_field(const Scene& s, std::string name) {
    if (name.empty()) {
        for (const auto& e : s.expectations)
            if (e.kind == "levi_scan") { name = e.details.at("field").get<std::string>(); break; }
    }
    if (name.empty() && !s.fields.empty()) name = s.fields.begin()->first;
    if (name.empty()) throw InputError("scene has no field; set levi.field");
    auto it = s.fields.find(name);
    if (it != s.fields.end()) return it->second;
    return catalogue_field(name, s.n);
}

VoxelSet scan_region_of(const Scene& s) {
    if (s.K.empty() && s.omega) return s.omega->voxelization();
    return s.K;
}

HatFamily scene_family(const json& cfg, const Scene& s) {
    HatFamilyConfig fc = s.family;
    fc.seed = cfg.at("seed").get<std::uint64_t>();
    return generate_family(fc, s.ambient);
}

NucleusOptions nucleus_options(const json& cfg) {
    NucleusOptions o;
    o.max_iter = cfg.at("nucleus").at("max_iter").get<int>();
    o.threads = cfg.at("nucleus").at("threads").get<int>();
    if (o.max_iter < 0) throw InputError("nucleus.max_iter must be >= 0");
    return o;
}

ProbeCounts probe_counts(const json& cfg) {
    const json& v = cfg.at("verify");
    return {v.at("surface").get<int>(), v.at("filled").get<int>(), cfg.at("seed").get<std::uint64_t>()};
}

}  // namespace

int cmd_levi_scan(const json& cfg) {
    const Scene s = load_scene(cfg);
    const json& lc = cfg.at("levi");
    const ScalarField f = pick_field(s, lc.at("field").get<std::string>());
    ScanOptions so;
    so.q = s.q;
    so.strict = lc.at("strict").get<bool>();
    so.levi.tau = lc.at("tau").get<double>();
    so.levi.step = lc.at("step").get<double>();
    so.jitter_per_voxel = lc.at("jitter").get<int>();
    so.seed = cfg.at("seed").get<std::uint64_t>();
    so.record_points = lc.at("csv").get<bool>();
    const ScanReport r = scan_region(f, scan_region_of(s), so);

    json out = header(cfg, s, "levi-scan");
    out["field"] = f.name;
    out["report"] = to_json(r);
    write_report(cfg, "levi-scan.json", out);
    if (so.record_points) write_report(cfg, "levi-scan.csv", scan_csv(r));
    const bool ok = r.all_pass() && r.domain_errors == 0;
    std::printf("levi-scan %s field=%s points=%lld fail=%lld domain_errors=%lld\n", ok ? "pass" : "FAIL",
                f.name.c_str(), static_cast<long long>(r.points_scanned), static_cast<long long>(r.fail),
                static_cast<long long>(r.domain_errors));
    return ok ? kOk : kFindings;
}

int cmd_nucleus(const json& cfg) {
    const Scene s = load_scene(cfg);
    const HatFamily fam = scene_family(cfg, s);
    const NucleusResult nr = approximate_nucleus(s.K, s.q, fam, s.ambient, nucleus_options(cfg));

    json out = header(cfg, s, "nucleus");
    out["family"] = {{"config", to_json(fam.config)}, {"pairs", fam.pairs.size()}, {"warnings", fam.warnings}};
    out["K_count"] = s.K.count();
    out["residual_count"] = nr.residual.count();
    out["iterations"] = nr.iterations;
    out["converged"] = nr.converged;
    out["residual"] = voxelset_to_json(nr.residual);
    write_report(cfg, "nucleus.json", out);
    json seq = sequence_to_json(nr.sequence);
    seq["scene"] = s.name;
    seq["seed"] = cfg.at("seed");
    write_report(cfg, "sequence.json", seq);
    std::printf("nucleus K=%lld residual=%lld cuts=%zu iterations=%d converged=%s\n",
                static_cast<long long>(s.K.count()), static_cast<long long>(nr.residual.count()),
                nr.sequence.records.size(), nr.iterations, nr.converged ? "yes" : "no");
    return nr.converged ? kOk : kIterCap;
}

}  // namespace qcli

namespace qcli {

int cmd_construct(const json& cfg) {
    const Scene s = load_scene(cfg);
    const json& cc = cfg.at("construct");
    const std::string seq_path = cc.at("sequence").get<std::string>();
    auto sequence = [&]() -> CutSequence {
        if (seq_path.empty())
            return approximate_nucleus(s.K, s.q, scene_family(cfg, s), s.ambient, nucleus_options(cfg)).sequence;
        json j;
        try {
            j = read_json_file(seq_path);
        } catch (const json::exception& e) {
            throw FormatError(std::string("unreadable sequence file: ") + e.what());
        }
        return apply_sequence(s.K, pairs_from_json(j), s.ambient, s.q);
    };
    const CutSequence seq = sequence();

    BuildOptions bo;
    bo.margin = cc.at("margin").get<double>();
    bo.tolerance = cc.at("tolerance").get<double>();
    bo.dilation = cc.at("dilation").get<int>();
    std::optional<ConstructedFunction> built;
    try {
        built = build_q_convex(s.K, seq, s.q, s.ambient, bo);
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "construct refused: %s\n", e.what());
        return kConstructError;
    } catch (const WitnessError& e) {
        std::fprintf(stderr, "construction failed: %s (voxel %lld, step %d)\n", e.what(), e.voxel, e.step);
        return kConstructError;
    }

    const ConstructedFunction& f = *built;
    CertifyOptions co;
    co.tau = cc.at("tau").get<double>();
    co.samples = cc.at("samples").get<int>();
    co.seed = cfg.at("seed").get<std::uint64_t>();
    const CertifyReport rep = certify_constructed(f, s.K, s.q, co);

    json fn = header(cfg, s, "construct");
    fn["function"] = to_json(f);
    write_report(cfg, "constructed.json", fn);
    json cert = header(cfg, s, "construct");
    cert["certification"] = to_json(rep);
    cert["pass"] = rep.pass();
    write_report(cfg, "certify.json", cert);
    std::printf("construct steps=%zu samples=%lld positive_failures=%lld convexity_failures=%lld %s\n",
                f.scales.size(), static_cast<long long>(rep.samples), static_cast<long long>(rep.positive_failures),
                static_cast<long long>(rep.convexity_failures), rep.pass() ? "certified" : "NOT certified");
    return rep.pass() ? kOk : kFindings;
}

int cmd_scene_list() {
    for (const auto& n : scene_names()) std::printf("%s\n", n.c_str());
    return kOk;
}

int cmd_scene_run(const json& cfg) {
    const Scene s = load_scene(cfg);
    const SceneReport r = run_expectations(s, scene_config(cfg));
    json out = header(cfg, s, "scene run");
    out["report"] = to_json(r);
    write_report(cfg, "scene-" + s.name + ".json", out);
    for (const auto& e : r.results) std::printf("%s  %s\n", e.pass ? "pass" : "FAIL", e.name.c_str());
    return r.pass() ? kOk : kFindings;
}

}  // namespace qcli

namespace qcli {

namespace {

const DomainSpec& need_omega(const Scene& s) {
    if (!s.omega) throw InputError("scene " + s.name + " has no domain to probe");
    return *s.omega;
}

CPoint point_from(const json& j, int n) {
    const auto c = j.get<std::vector<double>>();
    if (static_cast<int>(c.size()) != 2 * n) throw InputError("point needs 2n real coordinates");
    return CPoint(c);
}

// Balls centred on {z2 = z1^2}.
std::vector<BallSpec> default_balls() {
    std::vector<BallSpec> out;
    for (Complex t : {Complex(0, 0), Complex(0.3, 0), Complex(-0.3, 0), Complex(0, 0.3), Complex(0.2, 0.2)})
        out.push_back({CPoint::from_complex({t, t * t}), 0.2});
    return out;
}

bool is_finding(const ProbeVerdict& v) {
    return v.is("violation") || v.is("first_contact") || v.is("fail");
}

}  // namespace

int cmd_verify(const json& cfg, const std::string& sub) {
    const Scene s = load_scene(cfg);
    const json& vc = cfg.at("verify");
    std::vector<ProbeVerdict> verdicts;

    if (sub == "hat-fill") {
        const HatPair pair = vc.at("hat").is_null() ? (s.probe_hat ? *s.probe_hat
                                                                   : throw InputError("set verify.hat for this scene"))
                                                    : hat_from_json(vc.at("hat"));
        const DomainSpec& omega = need_omega(s);
        ProbeVerdict v = hat_fill_probe(omega, pair, s.q, probe_counts(cfg));
        if (v.is("violation")) v.params["reverified"] = reverify_hat_violation(omega, pair, v);
        verdicts.push_back(v);
    } else if (sub == "disc-sweep") {
        DiscFamily fam;
        fam.base = vc.at("base").is_null() ? CPoint(s.n) : point_from(vc.at("base"), s.n);
        fam.q = s.q;
        fam.t_steps = vc.at("t_steps").get<int>();
        fam.disc_samples = vc.at("disc_samples").get<int>();
        verdicts.push_back(disc_family_sweep(need_omega(s), fam));
    } else if (sub == "hartogs") {
        if (!s.figure || !s.figure_embedding) throw InputError("scene " + s.name + " has no Hartogs figure");
        const DomainSpec& omega = need_omega(s);
        ProbeVerdict v = hartogs_probe(omega, *s.figure, *s.figure_embedding, s.q, probe_counts(cfg));
        if (v.is("violation"))
            v.params["reverified"] = reverify_hartogs_violation(omega, *s.figure, *s.figure_embedding, v);
        verdicts.push_back(v);
    } else if (sub == "local-max") {
        const std::string fname = vc.at("field").get<std::string>();
        const ScalarField psi = pick_field(s, fname.empty() && s.fields.count("re_z2") ? "re_z2" : fname);
        std::vector<BallSpec> balls;
        for (const auto& b : vc.at("balls")) balls.push_back({point_from(b.at("center"), s.n), b.at("radius")});
        if (balls.empty()) balls = default_balls();
        const VoxelSet A = scan_region_of(s);
        for (const auto& b : balls)
            verdicts.push_back(local_max_check(A, psi, b, s.q, vc.at("tau_gap").get<double>()));
    } else if (sub == "exhaustion-fill") {
        if (!s.figure || !s.figure_embedding) throw InputError("scene " + s.name + " has no Hartogs figure");
        const ScalarField rho = pick_field(s, vc.at("field").get<std::string>());
        verdicts.push_back(
            exhaustion_fill_check(need_omega(s), rho, *s.figure, *s.figure_embedding, s.q, probe_counts(cfg)));
    } else {
        throw InputError("unknown verify sub-command: " + sub);
    }

    json out = header(cfg, s, "verify");
    out["probe"] = sub;
    out["verdicts"] = json::array();
    bool finding = false;
    for (const auto& v : verdicts) {
        out["verdicts"].push_back(to_json(v));
        finding = finding || is_finding(v);
        std::printf("%s %s%s%s\n", v.probe.c_str(), v.verdict.c_str(), v.reason.empty() ? "" : ": ",
                    v.reason.c_str());
    }
    write_report(cfg, "verify-" + sub + ".json", out);
    return finding ? kFindings : kOk;
}

}  // namespace qcli
