#include "tamed/rational.hpp"

#include "support.hpp"

namespace tamed {
namespace {

using test::throws_kind;

TEST(Rational, ParsesEveryAcceptedSpelling) {
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
    EXPECT_EQ(Rational::parse("-0.125"), Rational(-1, 8));
    EXPECT_EQ(Rational::parse("1/8"), Rational(1, 8));
    EXPECT_EQ(Rational::parse("2^-4"), Rational(1, 16));
    EXPECT_EQ(Rational::parse("2^3"), Rational(8));
    EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
    EXPECT_EQ(Rational::parse("2.5e1"), Rational(25));
    EXPECT_EQ(Rational::parse("  0.3 "), Rational(3, 10));
}

TEST(Rational, DecimalIsExactNotBinary) {
    // 0.3 has no finite binary expansion; the parsed value must still be 3/10.
    const Rational r = Rational::parse("0.3");
    EXPECT_EQ(r.num(), 3);
    EXPECT_EQ(r.den(), 10);
}

TEST(Rational, RejectsGarbage) {
    EXPECT_TRUE(throws_kind([] { Rational::parse("abc"); }, ErrorKind::ConfigError));
    EXPECT_TRUE(throws_kind([] { Rational::parse(""); }, ErrorKind::ConfigError));
    EXPECT_TRUE(throws_kind([] { Rational::parse("1/x"); }, ErrorKind::ConfigError));
    EXPECT_TRUE(throws_kind([] { Rational::parse("1/0"); }, ErrorKind::InvalidRange));
}

TEST(Rational, StoredInLowestTermsWithPositiveDenominator) {
    const Rational r(6, -8);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(r.to_string(), "-3/4");
    EXPECT_EQ(Rational(4, 2).to_string(), "2");
}

TEST(Rational, ArithmeticAndOrdering) {
    const Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_LT(b, a);
    EXPECT_GT(Rational(-1, 2), Rational(-2, 3));
}

TEST(Rational, OverflowThrowsInsteadOfWrapping) {
    const Rational big(std::numeric_limits<std::int64_t>::max());
    EXPECT_TRUE(throws_kind([&] { (void)(big * Rational(2)); }, ErrorKind::InvalidRange));
    EXPECT_TRUE(throws_kind([&] { (void)(big + big); }, ErrorKind::InvalidRange));
}

TEST(Rational, RandomFieldIdentities) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        const Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        if (b.num() != 0) {
            EXPECT_EQ((a / b) * b, a);
        }
        EXPECT_EQ(Rational::parse(a.to_string()), a);
    }
}

}  // namespace
}  // namespace tamed
