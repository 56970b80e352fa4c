#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "acceptance.hpp"
#include "commands.hpp"
#include "qnucleus/io.hpp"
#include "qnucleus/scenes.hpp"
#include "qnucleus/verify.hpp"

namespace acceptance {

using namespace qnucleus;
using nlohmann::json;

namespace {

// Balls of radius 0.2 centred on the graph at a few parameters.
std::vector<BallSpec> graph_balls() {
    std::vector<BallSpec> out;
    for (Complex t : {Complex(0, 0), Complex(0.3, 0), Complex(-0.3, 0), Complex(0, 0.3), Complex(0.2, 0.2)})
        out.push_back({CPoint::from_complex({t, t * t}), 0.2});
    return out;
}

int run_quiet(std::vector<std::string> args) {
    args.insert(args.begin(), "qnucleus");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::fflush(stdout);
    const auto saved = ::dup(1);
    std::FILE* null = std::fopen("/dev/null", "w");
    ::dup2(::fileno(null), 1);
    const int code = qcli::run_cli(static_cast<int>(argv.size()), argv.data());
    std::fflush(stdout);
    ::dup2(saved, 1);
    ::close(saved);
    std::fclose(null);
    return code;
}

}  // namespace

Outcome local_maximum() {
    Outcome o;
    const Scene s = make_scene("analytic-tube");
    const ScalarField psi = catalogue_field("re_z2", 2);
    const ScalarField neg = catalogue_field("neg_norm2", 2);
    int passed = 0, skipped = 0;
    double worst_gap = -1e300;
    json rows = json::array();
    for (const auto& b : graph_balls()) {
        const ProbeVerdict v = local_max_check(s.K, psi, b, s.q);
        const ProbeVerdict c = local_max_check(s.K, neg, b, s.q);
        passed += v.is("pass");
        skipped += c.is("skipped");
        if (v.margins.value("interior_max", json()).is_number() && v.margins.value("boundary_max", json()).is_number())
            worst_gap = std::max(worst_gap, v.margins["interior_max"].get<double>() - v.margins["boundary_max"].get<double>());
        rows.push_back({{"psi", to_json(v)}, {"control", to_json(c)}});
    }
    o.pass = passed == 5 && skipped == 5;
    o.report = {{"balls", rows}};
    std::ostringstream m;
    m << passed << "/5 placements pass (worst interior - boundary max " << worst_gap << "), control skipped " << skipped
      << "/5";
    o.summary = m.str();
    return o;
}

Outcome continuity_probes() {
    Outcome o;
    std::ostringstream m;

    const Scene hv = make_scene("hartogs-violator");
    const ProbeVerdict hat = hat_fill_probe(*hv.omega, *hv.probe_hat, hv.q);
    const ProbeVerdict fig = hartogs_probe(*hv.omega, *hv.figure, *hv.figure_embedding, hv.q);
    const bool hat_ok = hat.is("violation") && reverify_hat_violation(*hv.omega, *hv.probe_hat, hat);
    const bool fig_ok = fig.is("violation") && reverify_hartogs_violation(*hv.omega, *hv.figure, *hv.figure_embedding, fig);
    m << "violator: hat-fill " << hat.verdict << (hat_ok ? " (re-verified)" : "") << ", hartogs " << fig.verdict
      << (fig_ok ? " (re-verified)" : "");

    // every pair of the default ball family against B(0, 1)
    const Scene ball = make_scene("ball");
    const HatFamily fam = generate_family(ball.family, ball.ambient);
    const ProbeCounts pc{1024, 1024, 0};
    std::int64_t violations = 0, engaged = 0;
    for (const auto& pair : fam.pairs) {
        const ProbeVerdict v = hat_fill_probe(*ball.omega, pair, ball.q, pc);
        violations += v.is("violation");
        engaged += v.reason.empty();
    }
    const bool ball_ok = violations == 0 && engaged > 0;
    m << "; ball family: " << violations << " violations over " << fam.pairs.size() << " pairs (" << engaged
      << " with the surface inside the ball)";

    const Scene be = make_scene("ball-exhaustion");
    const ProbeVerdict ex = exhaustion_fill_check(*be.omega, be.fields.at("rho"), *be.figure, *be.figure_embedding, be.q);
    m << "; exhaustion fill " << ex.verdict;

    o.pass = hat_ok && fig_ok && ball_ok && ex.is("pass");
    o.report = {{"violator_hat", to_json(hat)},
                {"violator_hartogs", to_json(fig)},
                {"ball_family", {{"pairs", fam.pairs.size()}, {"violations", violations}, {"engaged", engaged}}},
                {"exhaustion", to_json(ex)}};
    o.summary = m.str();
    return o;
}

Outcome reproducibility() {
    Outcome o;
    o.pass = true;
    std::ostringstream m;
    const std::vector<std::pair<std::string, Outcome (*)()>> reruns = {
        {"1", levi_oracle}, {"3", ball_nucleus_empty}, {"5", monotonicity}, {"9", local_maximum}, {"10", continuity_probes}};
    for (const auto& [id, fn] : reruns) {
        const std::string a = fn().report.dump(), b = fn().report.dump();
        const bool same = a == b && !a.empty();
        o.pass = o.pass && same;
        o.report[id] = same;
        m << id << (same ? " same" : " differs") << ", ";
    }
    // CLI reports, timestamps live only in the sidecar
    const auto root = std::filesystem::temp_directory_path() / ("qnucleus-acc-c11-" + std::to_string(::getpid()));
    const std::vector<std::vector<std::string>> cmds = {
        {"nucleus", "--scene", "ball", "--seed", "3"},
        {"levi-scan", "--scene", "cp-chart", "--seed", "3", "--set", "levi.jitter=2"},
        {"verify", "hat-fill", "--scene", "hartogs-violator", "--seed", "3"}};
    const std::vector<std::string> files = {"nucleus.json", "levi-scan.csv", "verify-hat-fill.json"};
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        std::string text[2];
        for (int r = 0; r < 2; ++r) {
            const auto dir = root / (std::to_string(i) + "_" + std::to_string(r));
            auto args = cmds[i];
            args.push_back("--out");
            args.push_back(dir.string());
            run_quiet(args);
            text[r] = std::filesystem::exists(dir / files[i]) ? read_file((dir / files[i]).string()) : "";
        }
        const bool same = !text[0].empty() && text[0] == text[1];
        o.pass = o.pass && same;
        o.report["cli_" + files[i]] = same;
        m << files[i] << (same ? " same" : " differs") << (i + 1 < cmds.size() ? ", " : "");
    }
    std::filesystem::remove_all(root);
    o.summary = "byte-identical reruns: " + m.str();
    return o;
}

}  // namespace acceptance
