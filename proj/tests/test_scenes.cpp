#include <gtest/gtest.h>

#include "qnucleus/scenes.hpp"

using namespace qnucleus;

namespace {

// Distance from (z1, z2) to {w = zeta^2}: dense zeta grid, then plain gradient descent.
double graph_distance(Complex z1, Complex z2) {
    auto f = [&](Complex t) { return std::norm(t - z1) + std::norm(t * t - z2); };
    Complex best = 0;
    double fb = f(best);
    for (int a = -60; a <= 60; ++a)
        for (int b = -60; b <= 60; ++b) {
            const Complex t(a * 0.025, b * 0.025);
            const double v = f(t);
            if (v < fb) { fb = v; best = t; }
        }
    double lr = 0.05;
    for (int it = 0; it < 4000; ++it) {
        // d/d conj(t) of |t - z1|^2 + |t^2 - z2|^2, times 2 for the real gradient
        const Complex g = 2.0 * ((best - z1) + 2.0 * std::conj(best) * (best * best - z2));
        const Complex cand = best - lr * g;
        const double v = f(cand);
        if (v < fb) { best = cand; fb = v; lr *= 1.1; } else { lr *= 0.5; }
        if (lr < 1e-16) break;
    }
    return std::sqrt(fb);
}

}  // namespace

TEST(Scenes, CatalogueAndUnknownName) {
    const auto names = scene_names();
    EXPECT_EQ(names.size(), 6u);
    EXPECT_THROW(make_scene("nope"), InputError);
    EXPECT_THROW(catalogue_field("nope", 2), InputError);
}

TEST(Scenes, BallVoxelCountMatchesEnumeration) {
    const Scene s = make_scene("ball", 20);
    const double w = 4.0 / 20;
    std::int64_t want = 0;
    for (int a = 0; a < 20; ++a)
        for (int b = 0; b < 20; ++b)
            for (int c = 0; c < 20; ++c)
                for (int d = 0; d < 20; ++d) {
                    const double x = -2 + (a + 0.5) * w, y = -2 + (b + 0.5) * w, u = -2 + (c + 0.5) * w,
                                 v = -2 + (d + 0.5) * w;
                    want += x * x + y * y + u * u + v * v <= 1.0;
                }
    EXPECT_EQ(s.K.count(), want);
}

TEST(Scenes, CpChartSignatureAtReferencePoint) {
    const Scene s = make_scene("cp-chart");
    // closed form at (0, 1): diag(1/|w2|^2, (1+|w1|^2)/|w2|^4) = I
    const Signature sig = signature(complex_hessian(s.fields.at("rho"), CPoint({0, 0, 1, 0})), kDefaultTau);
    EXPECT_EQ(sig.n_pos, 2);
    EXPECT_NEAR(sig.eigenvalues[0], 1.0, 1e-12);
    EXPECT_NEAR(sig.eigenvalues[1], 1.0, 1e-12);
}

TEST(Scenes, GraphNeighbourhoodMatchesDistanceOracle) {
    const ChartBox box = ChartBox::cube(2, 1.0, 8);
    const double radius = 0.3;
    const VoxelSet got = graph_neighbourhood(box, radius);
    int ambiguous = 0;
    for (std::int64_t i = 0; i < box.cell_count(); ++i) {
        const CPoint c = box.center(i);
        const double d = graph_distance(c.z(0), c.z(1));
        if (std::abs(d - radius) < 1e-6) { ++ambiguous; continue; }
        EXPECT_EQ(got.test(i), d <= radius) << "cell " << i << " distance " << d;
    }
    EXPECT_LT(ambiguous, 5);
    EXPECT_GT(got.count(), 0);
}

TEST(Scenes, TubeGraphCellsInsideK) {
    const Scene s = make_scene("analytic-tube", 12);
    ASSERT_TRUE(s.graph_cells.has_value());
    EXPECT_TRUE(is_subset(*s.graph_cells, s.K));
    EXPECT_TRUE(is_subset(s.K, s.ambient.allowed));
    s.ambient.allowed.for_each([&](std::int64_t i) {
        for (const auto& c : s.box.corners(i)) EXPECT_LT(c.norm(), 0.95);
    });
}

TEST(Scenes, Deterministic) {
    EXPECT_EQ(make_scene("analytic-tube", 12).K, make_scene("analytic-tube", 12).K);
    EXPECT_EQ(make_scene("bidisc", 12).K, make_scene("bidisc", 12).K);
}

TEST(Scenes, OverridesApplied) {
    SceneConfig c = scene_config_from_json(
        {{"name", "ball"}, {"resolution", 12}, {"seed", 3}, {"overrides", {{"family", {{"stride", 5}}}}}});
    EXPECT_EQ(c.resolution, 12);
    const Scene s = make_scene(c);
    EXPECT_EQ(s.family.stride, 5);
    EXPECT_EQ(s.family.seed, 3u);
    EXPECT_EQ(s.box.resolution()[0], 12);
}

TEST(Expectations, QuickScenesPass) {
    for (const char* name : {"cp-chart", "hartogs-violator", "ball-exhaustion"}) {
        const SceneReport r = run_expectations(make_scene(name));
        EXPECT_TRUE(r.pass()) << name << " " << to_json(r).dump();
    }
}

TEST(Expectations, BallSceneEmpties) {
    const SceneReport r = run_expectations(make_scene("ball"));
    EXPECT_TRUE(r.pass()) << to_json(r).dump();
}

TEST(Expectations, EmptyListTriviallyPasses) {
    Scene s = make_scene("cp-chart");
    s.expectations.clear();
    const SceneReport r = run_expectations(s);
    EXPECT_TRUE(r.pass());
    EXPECT_TRUE(r.results.empty());
}
