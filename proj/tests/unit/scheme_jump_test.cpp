#include "tamed/scheme_jump.hpp"

#include "tamed/problems.hpp"

#include "support.hpp"

namespace tamed {
namespace {

using test::grid;
using test::same_bits;
using test::throws_kind;

JumpSystem zero_jump_system() {
    JumpSystem sys;
    sys.neutral = [](ConstVec, Vec out) { out[0] = 0.0; };
    sys.drift = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.jump = [](ConstVec, ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.compensator = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.mark_sampler = [](std::mt19937_64& e, Vec m) { m[0] = std::uniform_real_distribution<double>(0, 1)(e); };
    sys.total_intensity = 1.0;
    sys.alpha = 0.25;
    return sys;
}

// G(y) = 0.2 y, f = -x, g = x u, intensity 2 with every mark equal to 1.
JumpSystem hand_jump_system() {
    JumpSystem sys;
    sys.neutral = [](ConstVec y, Vec out) { out[0] = 0.2 * y[0]; };
    sys.drift = [](ConstVec x, ConstVec, Vec out) { out[0] = -x[0]; };
    sys.jump = [](ConstVec x, ConstVec, ConstVec u, Vec out) { out[0] = x[0] * u[0]; };
    sys.compensator = [](ConstVec x, ConstVec, Vec out) { out[0] = 2.0 * x[0]; };
    sys.mark_sampler = [](std::mt19937_64&, Vec m) { m[0] = 1.0; };
    sys.total_intensity = 2.0;
    sys.kappa = 0.2;
    sys.alpha = 0.5;
    sys.moment_order = 1.5;
    return sys;
}

// State-independent jumps g = u with marks uniform on [0,1] and no drift.
JumpSystem martingale_system(double lambda) {
    JumpSystem sys = zero_jump_system();
    sys.jump = [](ConstVec, ConstVec, ConstVec u, Vec out) { out[0] = u[0]; };
    sys.compensator = [lambda](ConstVec, ConstVec, Vec out) { out[0] = 0.5 * lambda; };
    sys.total_intensity = lambda;
    return sys;
}

TEST(StepJump, IdentityWithoutCoefficientsOrEvents) {
    const JumpSystem sys = zero_jump_system();
    const std::vector<double> z{0.75}, zd{2.0}, zd1{-1.0};
    EXPECT_EQ(step_jump(sys, z, zd, zd1, 0.125, {})[0], 0.75);
}

TEST(StepJump, HandEvaluatedStepWithOneEvent) {
    // 0.16 + 1 - 0.1 + (-0.8)(0.0625) + (1*1 - 0.0625*2)
    const JumpSystem sys = hand_jump_system();
    const std::vector<double> z{1.0}, zd{0.5}, zd1{0.8};
    const std::vector<JumpEvent> ev{{0.01, {1.0}}};
    EXPECT_NEAR(step_jump(sys, z, zd, zd1, 0.0625, ev)[0], 1.885, 1e-15);
}

TEST(StepJump, HandEvaluatedCompensatorOnlyStep) {
    const JumpSystem sys = hand_jump_system();
    const std::vector<double> z{1.0}, zd{0.5}, zd1{0.8};
    EXPECT_NEAR(step_jump(sys, z, zd, zd1, 0.0625, {})[0], 0.885, 1e-15);
}

TEST(SimulateJump, SingleStepReproducesHandValue) {
    // Mbar = 1 with history (0.5, 1): z[1-Mbar] = z[0] = 1, so G contributes 0.2 - 0.1.
    const GridSpec g = grid("1/8", "1/16", "1/16");
    const JumpSystem sys = hand_jump_system();
    const InitialSegment seg(g, 1, {0.5, 1.0});
    const JumpRealization jr(Rational(1, 8), 1, {{0.03, {1.0}}});
    const PathRecord path = simulate_jump(sys, seg, g, jr);
    EXPECT_NEAR(path.at(1)[0], 0.2 + 1.0 - 0.1 - 0.05 + (1.0 - 0.125), 1e-15);
}

TEST(SimulateJump, ZeroSystemIsConstant) {
    const GridSpec g = grid("1", "1/4", "1/16");
    const JumpSystem sys = zero_jump_system();
    const InitialSegment seg = sample_segment(constant_segment({-3.0}), g, 1);
    const PathRecord path = simulate_jump(sys, seg, g, gen_jumps(g, 5.0, 1, sys.mark_sampler, 1));
    for (std::int64_t n = 0; n <= g.steps(); ++n) EXPECT_EQ(path.at(n)[0], -3.0);
}

TEST(SimulateJump, NoIntensityGivesDriftOnlyRecursion) {
    const GridSpec g = grid("1", "1/4", "1/32");
    const JumpSystem sys = make_jump_linear(0.0, 0.5);
    const InitialSegment seg = sample_segment(constant_segment({1.0}), g, 1);
    const PathRecord path = simulate_jump(sys, seg, g, gen_jumps(g, 0.0, 1, sys.mark_sampler, 1));
    const double h = g.step_value(), hpa = std::pow(h, sys.alpha);
    double z = 1.0;
    for (std::int64_t n = 0; n < g.steps(); ++n) {
        const double f = -z;
        // Empty event sum and a zero compensator: 0 - h*0.
        z = 0.0 + z - 0.0 + (f / (1.0 + hpa * std::fabs(f))) * h + (0.0 - h * 0.0);
        ASSERT_TRUE(same_bits(path.at(n + 1)[0], z)) << n;
    }
}

TEST(SimulateJump, JumpAtGridTimeLandsAtThatGridPoint) {
    const GridSpec g = grid("1", "1/4", "1/4");
    JumpSystem sys = martingale_system(0.0);
    const InitialSegment seg = sample_segment(constant_segment({0.0}), g, 1);
    const JumpRealization jr(Rational(1), 1, {{0.5, {1.0}}});
    const PathRecord path = simulate_jump(sys, seg, g, jr);
    EXPECT_EQ(path.at(1)[0], 0.0);
    EXPECT_EQ(path.at(2)[0], 1.0);
    EXPECT_EQ(path.at(4)[0], 1.0);
}

TEST(SimulateJump, MartingaleMeanVanishes) {
    const GridSpec g = grid("1", "1/4", "1/16");
    const double lambda = 2.0;
    const JumpSystem sys = martingale_system(lambda);
    const InitialSegment seg = sample_segment(constant_segment({1.0}), g, 1);
    constexpr int N = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int j = 0; j < N; ++j) {
        const auto jr = gen_jumps(g, lambda, 1, sys.mark_sampler, path_seed(77, static_cast<std::uint64_t>(j), StreamTag::Jumps));
        const double d = simulate_jump(sys, seg, g, jr).at(g.steps())[0] - 1.0;
        sum += d;
        sumsq += d * d;
    }
    const double mean = sum / N;
    const double se = std::sqrt((sumsq / N - mean * mean) / (N - 1));
    EXPECT_LT(std::fabs(mean), 4.0 * se);
}

TEST(SimulateJump, JumpContributionsAddUp) {
    const GridSpec g = grid("1", "1/4", "1/64");
    JumpSystem sys = martingale_system(30.0);
    sys.compensator = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto jr = gen_jumps(g, 30.0, 1, sys.mark_sampler, rng());
        double one_pass = 0.0;
        for (const auto& e : jr.events()) one_pass += e.mark[0];

        JumpStepper stepper(sys, g.step_value());
        std::vector<double> z{0.0}, out{0.0};
        double stepwise = 0.0;
        for (std::int64_t n = 0; n < g.steps(); ++n) {
            stepper.step(z, z, z, events_in_step(jr, n, g.step()), out, n);
            stepwise += stepper.last_jump_increment()[0];
        }
        EXPECT_NEAR(stepwise, one_pass, 1e-12 * (1.0 + one_pass));
    }
}

TEST(SimulateJump, NeutralTelescoping) {
    const GridSpec g = grid("1", "1/4", "1/64");
    const JumpSystem sys = make_jump_cubic_neutral(0.3, 4.0, 0.5);
    const InitialSegment seg = sample_segment(constant_segment({1.2}), g, 1);
    const auto jr = gen_jumps(g, sys.total_intensity, 1, sys.mark_sampler, 19);
    const PathRecord path = simulate_jump(sys, seg, g, jr);
    const std::int64_t Mbar = g.delay_steps();
    JumpStepper stepper(sys, g.step_value());
    std::vector<double> d1(1), d0(1), out(1);
    for (std::int64_t n = 0; n < g.steps(); ++n) {
        stepper.step(path.at(n), path.at(n - Mbar), path.at(n + 1 - Mbar), events_in_step(jr, n, g.step()), out, n);
        ASSERT_TRUE(same_bits(out[0], path.at(n + 1)[0]));
        sys.neutral(path.at(n + 1 - Mbar), d1);
        sys.neutral(path.at(n - Mbar), d0);
        const double lhs = (path.at(n + 1)[0] - d1[0]) - (path.at(n)[0] - d0[0]);
        const double rhs = stepper.last_drift_increment()[0] + stepper.last_jump_increment()[0];
        EXPECT_NEAR(lhs, rhs, 1e-14 * (1.0 + std::fabs(path.at(n + 1)[0])));
    }
}

TEST(SimulateJump, DriftIncrementBoundedPerStep) {
    const JumpSystem sys = make_jump_cubic_neutral();
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    for (double h : {0.25, 1.0 / 64, 1.0 / 1024}) {
        JumpStepper stepper(sys, h);
        std::vector<double> out(1);
        for (int i = 0; i < 5000; ++i) {
            const std::vector<double> z{coord(rng)}, d0{coord(rng)}, d1{coord(rng)};
            stepper.step(z, d0, d1, {}, out, i);
            ASSERT_LE(std::fabs(stepper.last_drift_increment()[0]), std::pow(h, 1.0 - sys.alpha));
        }
    }
}

TEST(SimulateJump, Deterministic) {
    const GridSpec g = grid("1", "1/4", "1/64");
    const JumpSystem sys = make_jump_linear(2.0, 0.5);
    const InitialSegment seg = sample_segment(constant_segment({1.0}), g, 1);
    const auto jr = gen_jumps(g, 2.0, 1, sys.mark_sampler, 3);
    EXPECT_EQ(simulate_jump(sys, seg, g, jr), simulate_jump(sys, seg, g, jr));
}

TEST(SimulateJump, SharedRealizationCouplesResolutions) {
    // Same events at h and h/2: the coupled difference must shrink with h.
    const JumpSystem sys = make_jump_linear(2.0, 0.5);
    const GridSpec fine = grid("1", "1/4", "1/512");
    double prev = std::numeric_limits<double>::infinity();
    for (const char* h : {"1/8", "1/32", "1/128"}) {
        const GridSpec coarse = grid("1", "1/4", h);
        const std::int64_t k = fine.steps() / coarse.steps();
        double err = 0.0;
        for (std::uint64_t j = 0; j < 400; ++j) {
            const auto jr = gen_jumps(fine, 2.0, 1, sys.mark_sampler, path_seed(1, j, StreamTag::Jumps));
            const auto c = simulate_jump(sys, sample_segment(constant_segment({1.0}), coarse, 1), coarse, jr);
            const auto f = simulate_jump(sys, sample_segment(constant_segment({1.0}), fine, 1), fine, jr);
            double sup = 0.0;
            for (std::int64_t n = 0; n <= coarse.steps(); ++n) sup = std::max(sup, std::fabs(c.at(n)[0] - f.at(k * n)[0]));
            err += sup * sup;
        }
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(SimulateJump, HorizonMismatch) {
    const GridSpec g = grid("1", "1/4", "1/8");
    const JumpSystem sys = zero_jump_system();
    const InitialSegment seg = sample_segment(constant_segment({1.0}), g, 1);
    const JumpRealization jr(Rational(2), 1, {});
    EXPECT_TRUE(throws_kind([&] { simulate_jump(sys, seg, g, jr); }, ErrorKind::GridMismatch));
}

}  // namespace
}  // namespace tamed
