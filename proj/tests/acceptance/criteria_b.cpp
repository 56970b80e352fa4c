#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "acceptance.hpp"
#include "commands.hpp"
#include "qnucleus/cuts.hpp"
#include "qnucleus/glue.hpp"
#include "qnucleus/io.hpp"
#include "qnucleus/scenes.hpp"

namespace acceptance {

using namespace qnucleus;
using nlohmann::json;

namespace {

VoxelSet random_balls(const ChartBox& box, std::mt19937_64& rng, int count, double spread, double rmax = 0.45) {
    std::uniform_real_distribution<double> c(-spread, spread), rad(0.15, rmax);
    std::vector<std::pair<CPoint, double>> balls;
    for (int i = 0; i < count; ++i) balls.push_back({CPoint({c(rng), c(rng), c(rng), c(rng)}), rad(rng)});
    return voxelize(
        [balls](const CPoint& p) {
            for (const auto& [ctr, r] : balls) {
                double d = 0;
                for (int a = 0; a < 4; ++a) d += (p[a] - ctr[a]) * (p[a] - ctr[a]);
                if (d <= r * r) return true;
            }
            return false;
        },
        box, VoxelizeMode::Centers);
}

// Equal-size cube grids centred at 0: the maps below send cell centers to cell centers.
VoxelSet map_set(const VoxelSet& s, const AffineMap& T) {
    VoxelSet out(s.box());
    s.for_each([&](std::int64_t i) {
        const auto j = s.box().cell_of(T.apply(s.box().center(i)));
        if (!j) throw InputError("map leaves the grid");
        out.set(*j);
    });
    return out;
}

HatFamily map_family(const HatFamily& f, const AffineMap& T) {
    HatFamily g = f;
    for (auto& p : g.pairs) p.embedding = T.compose(p.embedding);
    return g;
}

struct Run {
    VoxelSet residual;
    std::int64_t cuts;
};

Run nucleus_of(const VoxelSet& K, const HatFamily& fam, const AmbientDomain& amb, int max_iter = 50) {
    NucleusResult r = approximate_nucleus(K, 1, fam, amb, NucleusOptions{max_iter, 0});
    return {r.residual, static_cast<std::int64_t>(r.sequence.records.size())};
}

// Runs the CLI with stderr captured to a file.
int run_cli_capture(std::vector<std::string> args, std::string& err) {
    const auto path = std::filesystem::temp_directory_path() / ("qnucleus-acc-err-" + std::to_string(::getpid()));
    std::fflush(stderr);
    const int saved = ::dup(2);
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    ::dup2(fd, 2);
    ::close(fd);
    args.insert(args.begin(), "qnucleus");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    const int code = qcli::run_cli(static_cast<int>(argv.size()), argv.data());
    std::fflush(stderr);
    ::dup2(saved, 2);
    ::close(saved);
    err = read_file(path.string());
    std::filesystem::remove(path);
    return code;
}

}  // namespace

Outcome monotonicity() {
    Outcome o;
    // half the pairs on the ball grid, half in the tube scene where residuals survive;
    // stride 2 keeps the hat spacing of the default family at 24^4
    Scene ball = make_scene("ball", 16);
    ball.family.stride = 2;
    const Scene tube = make_scene("analytic-tube", 16);
    const HatFamily ball_fam = generate_family(ball.family, ball.ambient);
    const HatFamily tube_fam = generate_family(tube.family, tube.ambient);
    std::mt19937_64 rng(5);
    int holds = 0, nonempty = 0, shrunk = 0;
    json cases = json::array();
    for (int t = 0; t < 25; ++t) {
        const bool in_tube = t % 2 == 1;
        const Scene& s = in_tube ? tube : ball;
        const HatFamily& fam = in_tube ? tube_fam : ball_fam;
        const double spread = in_tube ? 0.6 : 0.3;
        const double rmax = in_tube ? 0.45 : 0.5;
        VoxelSet K = random_balls(s.box, rng, 1 + t % 3, spread, rmax);
        if (in_tube && t % 4 == 1) K |= *s.graph_cells;
        K &= s.ambient.allowed;
        VoxelSet L = K | random_balls(s.box, rng, 2, spread, rmax);
        L &= s.ambient.allowed;
        const MonotonicityVerdict v = monotonicity_check(K, L, 1, fam, s.ambient);
        holds += v.holds;
        nonempty += v.residual_K > 0;
        shrunk += v.residual_K < K.count();
        cases.push_back({{"scene", s.name}, {"K", K.count()}, {"L", L.count()}, {"residual_K", v.residual_K},
                         {"residual_L", v.residual_L}, {"violations", v.violations}, {"holds", v.holds}});
    }
    o.pass = holds == 25;
    o.report = {{"cases", cases}};
    std::ostringstream m;
    m << holds << "/25 nested pairs satisfy residual(K) in residual(L); " << nonempty << " with nonempty residual(K), " << shrunk << " where cuts shrank K";
    o.summary = m.str();
    return o;
}

Outcome confluence() {
    Outcome o;
    o.pass = true;
    std::ostringstream m;
    for (const char* name : {"ball", "analytic-tube"}) {
        const Scene s = make_scene(name);
        const HatFamily fam = generate_family(s.family, s.ambient);
        const Run base = nucleus_of(s.K, fam, s.ambient);
        std::mt19937_64 rng(17);
        int same = 0;
        json orders = json::array();
        for (int t = 0; t < 5; ++t) {
            HatFamily shuffled = fam;
            std::shuffle(shuffled.pairs.begin(), shuffled.pairs.end(), rng);
            const Run r = nucleus_of(s.K, shuffled, s.ambient);
            const bool eq = r.residual == base.residual && r.residual.words() == base.residual.words();
            same += eq;
            orders.push_back({{"cuts", r.cuts}, {"residual", r.residual.count()}, {"identical", eq}});
        }
        o.pass = o.pass && same == 5;
        o.report[name] = {{"residual", base.residual.count()}, {"cuts", base.cuts}, {"orders", orders}};
        m << name << " " << same << "/5 identical (residual " << base.residual.count() << "); ";
    }
    o.summary = m.str();
    return o;
}

Outcome affine_equivariance() {
    Outcome o;
    o.pass = true;
    CMatrix quarter = CMatrix::Identity(2, 2) * Complex(0, 1);
    CMatrix swap = CMatrix::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1;
    const std::vector<std::pair<std::string, AffineMap>> maps = {
        {"quarter", AffineMap(quarter, CVector::Zero(2))},
        {"permute", AffineMap(swap, CVector::Zero(2))},
        {"quarter_permute", AffineMap(quarter * swap, CVector::Zero(2))}};

    struct Input {
        std::string name;
        const Scene* scene;
        const HatFamily* family;
        VoxelSet K;
        int max_iter;
    };
    const Scene tube = make_scene("analytic-tube");
    const HatFamily tube_fam = generate_family(tube.family, tube.ambient);
    // the tube alone never gets cut; off-centre convex sets on the ball grid do
    const Scene ball = make_scene("ball", 24);
    const HatFamily ball_fam = generate_family(ball.family, ball.ambient);
    // shifted, unequal axes: not invariant under any of the maps
    const VoxelSet egg = voxelize(
        [](const CPoint& p) {
            const double a = (p[0] - 0.25) / 0.9, b = p[1] / 0.9, c = p[2] / 0.6, d = (p[3] + 0.25) / 0.6;
            return a * a + b * b + c * c + d * d <= 1.0;
        },
        ball.box, VoxelizeMode::Centers);
    const VoxelSet shifted = voxelize(
        [](const CPoint& p) {
            const double a = p[0] - 0.25, d = p[3] + 0.25;
            return a * a + p[1] * p[1] + p[2] * p[2] + d * d <= 0.49;
        },
        ball.box, VoxelizeMode::Centers);
    const std::vector<Input> inputs = {{"tube", &tube, &tube_fam, tube.K, 50},
                                       {"ellipsoid", &ball, &ball_fam, egg, 50},
                                       {"shifted_ball", &ball, &ball_fam, shifted, 50}};

    std::ostringstream m;
    int runs = 0;
    for (const auto& in : inputs) {
        const Scene& s = *in.scene;
        const Run base = nucleus_of(in.K, *in.family, s.ambient, in.max_iter);
        for (const auto& [mname, T] : maps) {
            AmbientDomain amb = s.ambient;
            amb.allowed = map_set(s.ambient.allowed, T);
            if (amb.exact) {
                const Predicate p = *amb.exact;
                const AffineMap Ti = T.inverse();
                amb.exact = [p, Ti](const CPoint& z) { return p(Ti.apply(z)); };
            }
            const Run r = nucleus_of(map_set(in.K, T), map_family(*in.family, T), amb, in.max_iter);
            const bool eq = r.residual == map_set(base.residual, T);
            o.pass = o.pass && eq;
            ++runs;
            o.report[in.name][mname] = {{"residual", r.residual.count()}, {"cuts", r.cuts}, {"equal", eq}};
            if (!eq) m << in.name << "/" << mname << " differs; ";
        }
        o.report[in.name]["base"] = {{"K", in.K.count()}, {"residual", base.residual.count()}, {"cuts", base.cuts}};
        m << in.name << " K " << in.K.count() << " -> " << base.residual.count() << " (" << base.cuts << " cuts); ";
    }
    m << runs << " transformed runs " << (o.pass ? "bit-exact" : "with mismatches");
    o.summary = m.str();
    return o;
}

Outcome round_trip() {
    Outcome o;
    const Scene ball = make_scene("ball");
    const HatFamily fam = generate_family(ball.family, ball.ambient);
    const NucleusResult nr = approximate_nucleus(ball.K, 1, fam, ball.ambient);
    const ConstructedFunction f = build_q_convex(ball.K, nr.sequence, 1, ball.ambient);
    CertifyOptions co;
    co.samples = 10000;
    const CertifyReport cr = certify_constructed(f, ball.K, 1, co);
    const bool ball_ok = nr.residual.empty() && cr.pass() && cr.samples >= 10000 && cr.worst_q_min_strict <= 1;

    const Scene tube = make_scene("analytic-tube");
    const Run tr = nucleus_of(tube.K, generate_family(tube.family, tube.ambient), tube.ambient);
    std::string err;
    const auto out = std::filesystem::temp_directory_path() / ("qnucleus-acc-c8-" + std::to_string(::getpid()));
    const int code = run_cli_capture({"construct", "--scene", "analytic-tube", "--out", out.string()}, err);
    std::filesystem::remove_all(out);
    const bool tube_ok = !tr.residual.empty() && code == 4 && err.find("construct refused: residual nonempty") != std::string::npos;

    o.pass = ball_ok && tube_ok;
    o.report = {{"ball", {{"cuts", nr.sequence.records.size()}, {"certify", to_json(cr)}}},
                {"tube", {{"residual", tr.residual.count()}, {"exit", code}, {"message", err}}}};
    std::ostringstream m;
    m << "ball: " << nr.sequence.records.size() << " cuts, certify " << (cr.pass() ? "pass" : "fail") << " at "
      << cr.samples << " samples, min value " << cr.min_value << ", worst q_min_strict " << cr.worst_q_min_strict
      << "; tube: residual " << tr.residual.count() << ", construct exit " << code;
    if (!err.empty()) m << " '" << err.substr(0, err.find('\n')) << "'";
    o.summary = m.str();
    return o;
}

}  // namespace acceptance
