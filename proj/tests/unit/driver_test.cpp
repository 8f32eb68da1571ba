#include "tamed/driver.hpp"

#include "support.hpp"

#include <set>

namespace tamed {
namespace {

using test::grid;
using test::same_bits;
using test::throws_kind;

MarkSampler unit_marks() {
    return [](std::mt19937_64& e, Vec m) { m[0] = std::uniform_real_distribution<double>(0.0, 1.0)(e); };
}

TEST(Seeds, DistinctPerPathAndPurpose) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t j = 0; j < 1000; ++j) {
        for (StreamTag tag : {StreamTag::Brownian, StreamTag::Jumps, StreamTag::Audit}) {
            seen.insert(path_seed(42, j, tag));
        }
    }
    EXPECT_EQ(seen.size(), 3000u);
    EXPECT_EQ(path_seed(42, 7, StreamTag::Brownian), path_seed(42, 7, StreamTag::Brownian));
    EXPECT_NE(path_seed(42, 7, StreamTag::Brownian), path_seed(43, 7, StreamTag::Brownian));
}

TEST(Brownian, SameSeedSameBits) {
    const GridSpec g = grid("1", "1/4", "1/64");
    EXPECT_EQ(gen_brownian(g, 2, 99), gen_brownian(g, 2, 99));
    EXPECT_NE(gen_brownian(g, 2, 99), gen_brownian(g, 2, 100));
    EXPECT_EQ(gen_brownian(g, 2, 99).data().size(), 128u);
}

TEST(Brownian, IncrementMomentsOverManyPaths) {
    const GridSpec g = grid("1", "1/4", "1/100");
    const double h = 0.01;
    constexpr int N = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int j = 0; j < N; ++j) {
        const double dB = gen_brownian(g, 1, path_seed(5, static_cast<std::uint64_t>(j), StreamTag::Brownian)).at(0)[0];
        sum += dB;
        sumsq += dB * dB;
    }
    const double mean = sum / N;
    const double var = sumsq / N - mean * mean;
    EXPECT_LT(std::fabs(mean), 4.0 * std::sqrt(h / N));
    EXPECT_NEAR(var, h, 0.05 * h);
}

TEST(Brownian, PartialSums) {
    const GridSpec g = grid("1", "1/4", "1/4");
    const BrownianPathIncrements inc(g, 1, {0.5, -0.25, 0.125, 1.0});
    EXPECT_EQ(inc.partial_sums(), (std::vector<double>{0.0, 0.5, 0.25, 0.375, 1.375}));
}

TEST(Coarsen, HandBlockSums) {
    const GridSpec g = grid("1", "1/2", "1/4");
    const BrownianPathIncrements fine(g, 1, {0.1, -0.2, 0.3, 0.05});
    const auto coarse = coarsen(fine, 2);
    EXPECT_EQ(coarse.grid().step(), Rational(1, 2));
    ASSERT_EQ(coarse.data().size(), 2u);
    EXPECT_TRUE(same_bits(coarse.data()[0], 0.1 + -0.2));
    EXPECT_TRUE(same_bits(coarse.data()[1], 0.3 + 0.05));
    EXPECT_DOUBLE_EQ(coarse.data()[0], -0.1);
    EXPECT_DOUBLE_EQ(coarse.data()[1], 0.35);
}

TEST(Coarsen, FactorOneIsIdentity) {
    const GridSpec g = grid("1", "1/4", "1/32");
    const auto inc = gen_brownian(g, 3, 8);
    EXPECT_EQ(coarsen(inc, 1), inc);
}

TEST(Coarsen, Associative) {
    const GridSpec g = grid("1", "1/2", "1/64");
    // Dyadic values make every partial sum exact, so the grouping cannot matter.
    std::vector<double> dyadic(64);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> k(-512, 512);
    for (double& v : dyadic) v = k(rng) / 1024.0;
    const BrownianPathIncrements exact(g, 1, dyadic);
    EXPECT_EQ(coarsen(coarsen(exact, 2), 2), coarsen(exact, 4));

    // Gaussian increments: regrouping changes rounding only.
    const auto inc = gen_brownian(g, 2, 77);
    const auto a = coarsen(coarsen(inc, 2), 2), b = coarsen(inc, 4);
    for (std::size_t i = 0; i < a.data().size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-15);
}

TEST(Coarsen, BlockSumsOfVectorNoise) {
    const GridSpec g = grid("1", "1/4", "1/16");
    const auto inc = gen_brownian(g, 2, 3);
    const auto c = coarsen(inc, 4);
    for (std::int64_t n = 0; n < c.steps(); ++n) {
        for (std::size_t r = 0; r < 2; ++r) {
            double s = 0.0;
            for (std::int64_t i = 0; i < 4; ++i) s += inc.at(4 * n + i)[r];
            EXPECT_TRUE(same_bits(c.at(n)[r], s));
        }
    }
    EXPECT_TRUE(throws_kind([&] { coarsen(inc, 3); }, ErrorKind::NotDivisible));
}

TEST(Jumps, ZeroIntensityIsEmpty) {
    const GridSpec g = grid("1", "1/4", "1/8");
    EXPECT_TRUE(gen_jumps(g, 0.0, 1, unit_marks(), 1).events().empty());
}

TEST(Jumps, Deterministic) {
    const GridSpec g = grid("1", "1/4", "1/8");
    EXPECT_EQ(gen_jumps(g, 3.0, 1, unit_marks(), 9), gen_jumps(g, 3.0, 1, unit_marks(), 9));
}

TEST(Jumps, CountMeanAndOrdering) {
    const GridSpec g = grid("1", "1/4", "1/8");
    constexpr int N = 100000;
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
        const auto jr = gen_jumps(g, 2.0, 1, unit_marks(), path_seed(6, static_cast<std::uint64_t>(j), StreamTag::Jumps));
        total += static_cast<double>(jr.events().size());
        double prev = 0.0;
        for (const auto& e : jr.events()) {
            ASSERT_GT(e.time, prev);
            ASSERT_LE(e.time, 1.0);
            ASSERT_GE(e.mark[0], 0.0);
            ASSERT_LT(e.mark[0], 1.0);
            prev = e.time;
        }
    }
    EXPECT_LT(std::fabs(total / N - 2.0), 4.0 * std::sqrt(2.0 / N));
}

TEST(Jumps, ConstructorValidates) {
    EXPECT_TRUE(throws_kind([] { JumpRealization(Rational(1), 1, {{0.5, {1.0}}, {0.5, {1.0}}}); },
                            ErrorKind::InvalidRange));
    EXPECT_TRUE(throws_kind([] { JumpRealization(Rational(1), 1, {{1.5, {1.0}}}); }, ErrorKind::InvalidRange));
    EXPECT_TRUE(throws_kind([] { JumpRealization(Rational(1), 1, {{0.0, {1.0}}}); }, ErrorKind::InvalidRange));
    EXPECT_NO_THROW(JumpRealization(Rational(1), 1, {{1.0, {1.0}}}));
}

TEST(EventsInStep, WindowsAreHalfOpen) {
    const JumpRealization none(Rational(1), 1, {});
    EXPECT_TRUE(events_in_step(none, 0, Rational(1, 4)).empty());

    const JumpRealization jr(Rational(1), 1, {{0.1, {1.0}}, {0.25, {2.0}}, {0.3, {3.0}}});
    const auto w0 = events_in_step(jr, 0, Rational(1, 4));
    ASSERT_EQ(w0.size(), 2u);  // a jump at exactly t = 0.25 ends step 0
    EXPECT_EQ(w0[0].time, 0.1);
    EXPECT_EQ(w0[1].time, 0.25);
    const auto w1 = events_in_step(jr, 1, Rational(1, 4));
    ASSERT_EQ(w1.size(), 1u);
    EXPECT_EQ(w1[0].time, 0.3);
}

TEST(EventsInStep, PartitionCoversEveryEventOnce) {
    const GridSpec g = grid("1", "1/4", "1/8");
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto jr = gen_jumps(g, 20.0, 1, unit_marks(), rng());
        for (const Rational H : {Rational(1, 8), Rational(1, 32), Rational(1, 2)}) {
            std::size_t covered = 0;
            const std::int64_t steps = (Rational(1) / H).num();
            const JumpEvent* expected = jr.events().data();
            for (std::int64_t n = 0; n < steps; ++n) {
                for (const auto& e : events_in_step(jr, n, H)) {
                    ASSERT_EQ(&e, expected++);
                    ++covered;
                }
            }
            ASSERT_EQ(covered, jr.events().size());
        }
    }
}

TEST(BinaryDump, RoundTripsBitExact) {
    const GridSpec g = grid("1", "1/4", "1/16");
    const auto inc = gen_brownian(g, 2, 31);
    std::stringstream bs;
    write_binary(bs, inc);
    EXPECT_EQ(read_brownian(bs), inc);

    const auto jr = gen_jumps(g, 5.0, 1, unit_marks(), 32);
    std::stringstream js;
    write_binary(js, jr);
    EXPECT_EQ(read_jumps(js), jr);
}

TEST(BinaryDump, MalformedInputIsIoError) {
    std::stringstream junk("not a dump");
    EXPECT_TRUE(throws_kind([&] { read_brownian(junk); }, ErrorKind::IoError));

    const GridSpec g = grid("1", "1/4", "1/16");
    std::stringstream bs;
    write_binary(bs, gen_brownian(g, 1, 1));
    std::string bytes = bs.str();
    bytes.resize(bytes.size() - 3);
    std::stringstream truncated(bytes);
    EXPECT_TRUE(throws_kind([&] { read_brownian(truncated); }, ErrorKind::IoError));

    std::stringstream wrong_kind(bs.str());
    EXPECT_TRUE(throws_kind([&] { read_jumps(wrong_kind); }, ErrorKind::IoError));
}

}  // namespace
}  // namespace tamed
