#include <gtest/gtest.h>

#include "qnucleus/scenes.hpp"
#include "qnucleus/verify.hpp"

using namespace qnucleus;

namespace {

const ChartBox kBox = ChartBox::cube(2, 2.0, 8);

}  // namespace

TEST(HatFill, EverywhereIsConsistent) {
    const HatPair pair = HatPair::oriented(2, 0.3, CVector::Zero(2), CMatrix::Identity(2, 2), 1.0);
    const ProbeVerdict v = hat_fill_probe(domain_everything(kBox), pair, 1);
    EXPECT_TRUE(v.is("consistent")) << v.verdict;
    EXPECT_FALSE(v.witness.has_value());
}

TEST(HatFill, PuncturedDomainViolatesAndReverifies) {
    // the filling passes through the removed ball, S stays outside it
    const DomainSpec omega = domain_ball_complement(kBox, 0.2);
    CVector c(2);
    c << Complex(-0.6, 0), Complex(0, 0);
    const HatPair pair = HatPair::oriented(2, 0.3, c, CMatrix::Identity(2, 2), 1.0);
    const ProbeVerdict v = hat_fill_probe(omega, pair, 1);
    ASSERT_TRUE(v.is("violation")) << v.verdict << " " << v.reason;
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_FALSE(omega(*v.witness));
    EXPECT_NE(hat_membership(pair, *v.witness), HatRegion::Outside);
    EXPECT_TRUE(reverify_hat_violation(omega, pair, v));
}

TEST(DiscSweep, FirstContactNearZero) {
    const DomainSpec omega = domain_ball_complement(kBox, 0.02);
    DiscFamily fam;
    fam.base = CPoint({-0.5, 0.0, 0.0, 0.0});
    const ProbeVerdict v = disc_family_sweep(omega, fam);
    ASSERT_TRUE(v.is("first_contact")) << v.verdict;
    const double t_star = v.margins.at("t_star").get<double>();
    const double step = v.margins.at("step").get<double>();
    EXPECT_LE(std::abs(t_star), 0.02 + step);
    EXPECT_FALSE(omega(*v.witness));
}

TEST(DiscSweep, NoContactAndHypothesisFailure) {
    DiscFamily fam;
    fam.base = CPoint({-0.5, 0.0, 0.0, 0.0});
    EXPECT_TRUE(disc_family_sweep(domain_everything(kBox), fam).is("no_contact"));
    // boundary circles of radius up to 1 leave B(0, 0.9)
    EXPECT_THROW(disc_family_sweep(domain_ball(kBox, 0.9), fam), InputError);
    for (const auto& p : disc_samples(fam, 0.3, 64, true)) EXPECT_NEAR(std::abs(p.z(1)), std::sqrt(1 - 0.09), 1e-12);
}

TEST(Hartogs, ViolatorSceneAndOrderCheck) {
    const Scene s = make_scene("hartogs-violator");
    const ProbeVerdict v = hartogs_probe(*s.omega, *s.figure, *s.figure_embedding, 1);
    ASSERT_TRUE(v.is("violation")) << v.reason;
    EXPECT_TRUE(reverify_hartogs_violation(*s.omega, *s.figure, *s.figure_embedding, v));
    EXPECT_THROW(hartogs_probe(*s.omega, HartogsFigure{1, 1, 0.5, 0.5}, *s.figure_embedding, 2), PreconditionError);
    const ProbeVerdict ok = hartogs_probe(domain_everything(kBox), *s.figure, AffineMap::identity(2), 1);
    EXPECT_TRUE(ok.is("consistent"));
}

TEST(HartogsFigureInBall, ConsistentForConvexDomain) {
    const DomainSpec ball = domain_ball(kBox, 1.0);
    const AffineMap embed(CMatrix::Identity(2, 2) * 0.6, CVector::Zero(2));
    EXPECT_TRUE(hartogs_probe(ball, HartogsFigure{1, 1, 0.5, 0.5}, embed, 1).is("consistent"));
}

TEST(LocalMax, PluriharmonicPassesAndNegativeControlSkipped) {
    const ChartBox box = ChartBox::cube(2, 1.0, 10);
    const VoxelSet A = VoxelSet::full(box);
    const BallSpec L{CPoint({0.1, 0.0, -0.1, 0.0}), 0.5};
    const ProbeVerdict v = local_max_check(A, catalogue_field("re_z2", 2), L, 1);
    EXPECT_TRUE(v.is("pass")) << v.verdict << " " << v.reason;
    const ProbeVerdict neg = local_max_check(A, catalogue_field("neg_norm2", 2), L, 1);
    EXPECT_TRUE(neg.is("skipped")) << neg.verdict;
}

TEST(ExhaustionFill, BallExhaustionPasses) {
    const Scene s = make_scene("ball-exhaustion");
    const ProbeVerdict v = exhaustion_fill_check(*s.omega, s.fields.at("rho"), *s.figure, *s.figure_embedding, 1);
    EXPECT_TRUE(v.is("pass")) << v.reason;
}

TEST(Verdicts, JsonCarriesWitness) {
    ProbeVerdict v;
    v.probe = "x";
    v.verdict = "violation";
    v.witness = CPoint({1.0, 2.0, 3.0, 4.0});
    const auto j = to_json(v);
    EXPECT_EQ(j.at("verdict"), "violation");
    EXPECT_EQ(j.at("witness").get<std::vector<double>>(), (std::vector<double>{1, 2, 3, 4}));
}
