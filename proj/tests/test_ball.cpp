#include <gmpxx.h>

#include <random>

#include "etalab/adaptive.hpp"
#include "etalab/bernoulli.hpp"
#include "support.hpp"

using namespace etalab;
using etalab::testing::dec;
using etalab::testing::overlap;

TEST(Ball, ExactIntegerSumHasZeroRadius) {
    const Ball s = Ball::from_int(1, 0, 128) + Ball::from_int(0, 1, 128);
    EXPECT_TRUE(s.is_exact());
    EXPECT_TRUE(s.contains(Ball::from_int(1, 1, 128)));
}

TEST(Ball, LogOfOneIsTight) {
    const Prec p = 200;
    const Ball z = log(Ball(1, p));
    EXPECT_TRUE(z.contains_zero());
    EXPECT_LE(z.abs_upper(), Mag::pow2(1 - static_cast<std::int64_t>(p)));
}

TEST(Ball, ExpOfIPiIsMinusOne) {
    const Ball z = exp(Ball::from_int(0, 1, 256) * Ball::pi(256));
    EXPECT_TRUE(z.contains(Ball(-1, 256)) || z.overlaps(Ball(-1, 256)));
    EXPECT_GT(z.accuracy_digits(), 70);
}

TEST(Ball, DivisionByZeroBallThrows) {
    const Ball x = Ball(1, 64);
    const Ball z = Ball(0, 64).with_added_rad(Mag::pow2(-10));
    try {
        (void)(x / z);
        FAIL() << "expected DivisorContainsZero";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivisorContainsZero);
    }
}

TEST(Ball, LogOnNegativeAxisThrows) {
    try {
        (void)log(Ball(-2, 64).with_added_rad(Mag::pow2(-20)));
        FAIL() << "expected LogOnBranchCut";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LogOnBranchCut);
    }
}

TEST(Ball, SerializeRoundTripContains) {
    const Ball x = Ball::ln2(300) / Ball::from_int(3, 7, 300);
    const Ball y = Ball::parse(x.serialize());
    EXPECT_TRUE(y.contains(x));
}

TEST(Bernoulli, ClassicalValues) {
    EXPECT_TRUE(bernoulli(2, 128).contains(Ball::from_mpq(mpq_class(1, 6), 128)));
    const auto& b = *bernoulli_even(5);
    EXPECT_EQ(b[0], mpq_class(1, 6));
    EXPECT_EQ(b[1], mpq_class(-1, 30));
    EXPECT_EQ(b[4], mpq_class(5, 66));
    EXPECT_TRUE(bernoulli(7, 64).is_exact());
    EXPECT_TRUE(bernoulli(7, 64).contains_zero());
}

// Random complex rationals against exact mpq arithmetic.
TEST(Ball, EnclosureAgainstRationalOracle) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 999);
    const Prec p = 80;
    const Prec hp = 2000;
    for (int t = 0; t < 200; ++t) {
        auto draw = [&] {
            mpq_class q(num(rng), den(rng));
            q.canonicalize();
            return q;
        };
        const mpq_class ar = draw(), ai = draw(), br = draw(), bi = draw();
        auto ball = [&](const mpq_class& r, const mpq_class& i, Prec q) {
            return Ball::from_mpq(r, q) + Ball::from_int(0, 1, q) * Ball::from_mpq(i, q);
        };
        const Ball a = ball(ar, ai, p);
        const Ball b = ball(br, bi, p);
        // (ar + i ai)(br + i bi) and the quotient, exactly.
        const mpq_class pr = ar * br - ai * bi, pi = ar * bi + ai * br;
        EXPECT_TRUE(overlap(a * b, ball(pr, pi, hp)));
        EXPECT_TRUE(overlap(a + b, ball(ar + br, ai + bi, hp)));
        EXPECT_TRUE(overlap(a - b, ball(ar - br, ai - bi, hp)));
        const mpq_class n2 = br * br + bi * bi;
        if (n2 != 0) {
            const mpq_class qr = (ar * br + ai * bi) / n2, qi = (ai * br - ar * bi) / n2;
            EXPECT_TRUE(overlap(a / b, ball(qr, qi, hp)));
        }
        EXPECT_TRUE(overlap(a.pow_si(5), ball(ar, ai, hp).pow_si(5)));
    }
}

TEST(Ball, DoublingPrecisionNeverWidens) {
    auto task = [](Prec p) { return pow(Ball::from_int(3, 4, p), Ball::from_decimal("0.5", "1.25", p)); };
    for (Prec p : {64, 128, 256, 512}) {
        const Ball lo = task(p);
        const Ball hi = task(2 * p);
        EXPECT_LE(hi.rad(), lo.rad());
        EXPECT_TRUE(lo.contains(hi) || lo.overlaps(hi));
    }
}

TEST(Adaptive, OneThirdTimesThree) {
    const Ball x = adaptive_eval([](Prec p) { return (Ball(1, p) / Ball(3, p)) * Ball(3, p); }, AccuracyTarget(30));
    EXPECT_TRUE(x.overlaps(Ball(1, 64)));
    EXPECT_LE(x.relative_accuracy(), Mag::from_double_down(1e-30));
}

TEST(Adaptive, CapForcesAccuracyUnreachable) {
    try {
        (void)adaptive_eval([](Prec p) { return Ball::pi(p); }, AccuracyTarget(200, 128));
        FAIL() << "expected AccuracyUnreachable";
    } catch (const AccuracyUnreachable& e) {
        EXPECT_GT(e.achieved_digits(), 10);
        EXPECT_TRUE(e.best().has_value());
    }
}

TEST(Adaptive, InputRadiusStallsInsteadOfRunningToTheCap) {
    const Ball coarse = dec("0.3").with_added_rad(Mag::pow2(-60));
    try {
        (void)adaptive_eval([&](Prec p) { return exp(coarse.with_prec(p)); }, AccuracyTarget(40));
        FAIL() << "expected AccuracyUnreachable";
    } catch (const AccuracyUnreachable& e) {
        EXPECT_NE(std::string(e.what()).find("no gain"), std::string::npos);
    }
}

TEST(Adaptive, TargetValidation) {
    EXPECT_THROW(AccuracyTarget(0), Error);
    EXPECT_THROW(AccuracyTarget(10, 32), Error);
    EXPECT_EQ(AccuracyTarget(30).start_prec(), 64 + 100);
}
