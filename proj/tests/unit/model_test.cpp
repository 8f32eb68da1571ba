#include "tamed/model.hpp"

#include "support.hpp"

namespace tamed {
namespace {

using test::grid;
using test::throws_kind;

TEST(Grid, ExactDivision) {
    const GridSpec g = grid("1", "1/4", "1/8");
    EXPECT_EQ(g.steps(), 8);
    EXPECT_EQ(g.delay_steps(), 2);
    EXPECT_EQ(g.point_count(), 11u);

    const GridSpec g2 = grid("2", "1/2", "1/2");
    EXPECT_EQ(g2.steps(), 4);
    EXPECT_EQ(g2.delay_steps(), 1);
}

TEST(Grid, IncommensurateDelay) {
    EXPECT_TRUE(throws_kind([] { grid("1", "0.3", "0.125"); }, ErrorKind::NotCommensurate));
    EXPECT_TRUE(throws_kind([] { grid("1", "1/4", "1/3"); }, ErrorKind::NotCommensurate));
}

TEST(Grid, RangeChecks) {
    EXPECT_TRUE(throws_kind([] { grid("2", "1/2", "1"); }, ErrorKind::InvalidRange));
    EXPECT_TRUE(throws_kind([] { grid("1", "0", "1/8"); }, ErrorKind::InvalidRange));
    EXPECT_TRUE(throws_kind([] { grid("1", "1", "1/8"); }, ErrorKind::InvalidRange));
    EXPECT_TRUE(throws_kind([] { grid("1", "1/4", "-1/8"); }, ErrorKind::InvalidRange));
}

TEST(Grid, StepCountsMultiplyBackExactly) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> pick(1, 12);
    for (int i = 0; i < 500; ++i) {
        const std::int64_t den = std::int64_t{1} << pick(rng);
        const std::int64_t mbar = pick(rng);
        const std::int64_t m = mbar + pick(rng);
        const Rational h(1, den);
        if (!(h < Rational(1))) continue;
        const GridSpec g = build_grid(h * Rational(m), h * Rational(mbar), h);
        EXPECT_EQ(Rational(g.steps()) * g.step(), g.horizon());
        EXPECT_EQ(Rational(g.delay_steps()) * g.step(), g.delay());
        EXPECT_EQ(g.time(g.steps()), g.horizon().to_double());
        EXPECT_EQ(g.time(-g.delay_steps()), -g.delay().to_double());
    }
}

TEST(Grid, CoarsenGridRequiresDivisibility) {
    const GridSpec fine = grid("1", "1/4", "1/16");
    const GridSpec coarse = coarsen_grid(fine, 4);
    EXPECT_EQ(coarse.step(), Rational(1, 4));
    EXPECT_TRUE(throws_kind([&] { coarsen_grid(fine, 3); }, ErrorKind::NotDivisible));
    EXPECT_TRUE(throws_kind([&] { coarsen_grid(fine, 8); }, ErrorKind::NotDivisible));  // Mbar = 4
}

TEST(Segment, ConstantHistory) {
    const GridSpec g = grid("1", "1/4", "1/8");
    const InitialSegment seg = sample_segment(constant_segment({2.5}), g, 1);
    ASSERT_EQ(seg.values().size(), 3u);
    for (double v : seg.values()) EXPECT_EQ(v, 2.5);
}

TEST(Segment, LinearHistory) {
    const GridSpec g = grid("1", "1/4", "1/8");
    const InitialSegment seg = sample_segment([](double t, Vec out) { out[0] = t; }, g, 1);
    EXPECT_EQ(seg.at(-2)[0], -0.25);
    EXPECT_EQ(seg.at(-1)[0], -0.125);
    EXPECT_EQ(seg.at(0)[0], 0.0);
}

TEST(Segment, SineHistoryAtGridPoints) {
    const GridSpec g = grid("1", "1/4", "1/8");
    const InitialSegment seg = sample_segment([](double t, Vec out) { out[0] = std::sin(t); }, g, 1);
    EXPECT_DOUBLE_EQ(seg.at(-2)[0], -0.24740395925452294);
    EXPECT_DOUBLE_EQ(seg.at(-1)[0], -0.12467473338522769);
    EXPECT_EQ(seg.at(0)[0], 0.0);
}

TEST(Segment, ResamplingIsIdempotent) {
    const GridSpec g = grid("1", "1/2", "1/16");
    auto xi = [](double t, Vec out) {
        out[0] = std::cos(3 * t);
        out[1] = t * t;
    };
    const InitialSegment a = sample_segment(xi, g, 2);
    const InitialSegment b = sample_segment(xi, g, 2);
    ASSERT_EQ(a.values().size(), b.values().size());
    for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_TRUE(test::same_bits(a.values()[i], b.values()[i]));
}

TEST(Segment, RejectsWrongLengthAndNonFinite) {
    const GridSpec g = grid("1", "1/4", "1/8");
    EXPECT_TRUE(throws_kind([&] { InitialSegment(g, 1, {1.0, 2.0}); }, ErrorKind::GridMismatch));
    EXPECT_TRUE(throws_kind([&] { InitialSegment(g, 1, {1.0, NAN, 2.0}); }, ErrorKind::NonFiniteState));
    EXPECT_TRUE(throws_kind([&] { (void)InitialSegment(g, 1, {1, 2, 3}).at(1); }, ErrorKind::InvalidRange));
}

DiffusionSystem zero_neutral_system() {
    DiffusionSystem sys;
    sys.neutral = [](ConstVec, Vec out) { out[0] = 0.0; };
    sys.drift = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.diffusion = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    return sys;
}

TEST(Validate, DiffusionRanges) {
    DiffusionSystem sys = zero_neutral_system();
    EXPECT_NO_THROW(validate(sys));
    sys.alpha = 0.5;
    EXPECT_NO_THROW(validate(sys));
    sys.alpha = 0.51;
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
    sys.alpha = 0.0;
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
    sys.alpha = 0.5;
    sys.kappa = 1.0;
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
    sys.kappa = 0.5;
    sys.neutral = [](ConstVec y, Vec out) { out[0] = 0.5 * y[0] + 0.1; };
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
}

TEST(Validate, ZeroNeutralAcceptedForAnyKappa) {
    DiffusionSystem sys = zero_neutral_system();
    for (double k : {0.01, 0.5, 0.99}) {
        sys.kappa = k;
        EXPECT_NO_THROW(validate(sys));
    }
}

TEST(Validate, JumpAlphaBelowOneOverP) {
    JumpSystem sys;
    sys.neutral = [](ConstVec, Vec out) { out[0] = 0.0; };
    sys.drift = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.jump = [](ConstVec, ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.compensator = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.mark_sampler = [](std::mt19937_64&, Vec m) { m[0] = 0.0; };
    sys.moment_order = 2.0;
    sys.alpha = 0.49;
    EXPECT_NO_THROW(validate(sys));
    sys.alpha = 0.5;
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
    sys.moment_order = 4.0;
    sys.alpha = 0.25;
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
    sys.alpha = 0.2;
    EXPECT_NO_THROW(validate(sys));
    sys.total_intensity = -1.0;
    EXPECT_TRUE(throws_kind([&] { validate(sys); }, ErrorKind::InvalidRange));
}

TEST(PathRecordTest, IndexingAndExplosionFlag) {
    const GridSpec g = grid("1", "1/4", "1/8");
    PathRecord path(g, 1);
    for (std::int64_t n = -2; n <= 8; ++n) path.at(n)[0] = static_cast<double>(n);
    EXPECT_EQ(path.forward_data().size(), 9u);
    EXPECT_EQ(path.forward_data()[0], 0.0);
    EXPECT_FALSE(path.exploded());
    path.mark_exploded(5);
    EXPECT_TRUE(path.exploded());
    EXPECT_EQ(*path.exploded_from(), 5);
    EXPECT_EQ(path.at(4)[0], 4.0);
    for (std::int64_t n = 5; n <= 8; ++n) EXPECT_TRUE(std::isnan(path.at(n)[0]));
}

TEST(Norm, MatchesNaiveAndAvoidsOverflow) {
    const std::vector<double> v{3.0, 4.0};
    EXPECT_DOUBLE_EQ(euclidean_norm(v), 5.0);
    const std::vector<double> big{3e200, 4e200};
    EXPECT_DOUBLE_EQ(euclidean_norm(big), 5e200);
    const std::vector<double> one{-2.0};
    EXPECT_EQ(euclidean_norm(one), 2.0);
    const std::vector<double> zero{0.0, 0.0, 0.0};
    EXPECT_EQ(euclidean_norm(zero), 0.0);
}

}  // namespace
}  // namespace tamed
