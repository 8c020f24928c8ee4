#include "etalab/pointsets.hpp"
#include "support.hpp"

using namespace etalab;
using etalab::testing::dec;
using etalab::testing::near;

namespace {

ComplexLiteral lit(const char* s) { return ComplexLiteral::parse(s); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(ComplexLiteral, Grammar) {
    EXPECT_EQ(lit("0.4+17i").re, "0.4");
    EXPECT_EQ(lit("0.4+17i").im, "17");
    EXPECT_EQ(lit("-2.5-5i").im, "-5");
    EXPECT_EQ(lit("3").im, "0");
    EXPECT_EQ(lit("1e-3").re, "1e-3");
    EXPECT_EQ(lit("0.4+17i").str(), "0.4+17i");
    EXPECT_EQ(code_of([] { (void)lit("0.4 + 17i"); }), ErrorCode::UsageError);
    EXPECT_EQ(code_of([] { (void)lit("abc"); }), ErrorCode::UsageError);
}

TEST(PointSets, ReferenceGrid) {
    const PointSet A = grid(lit("-2.5+5i"), lit("2+1i"), lit("1+2i"), 2, 3, 128);
    ASSERT_EQ(A.size(), 12u);
    EXPECT_TRUE(A[0].contains(dec("-2.5", "5", 128)));
    EXPECT_TRUE(A[11].contains(dec("4.5", "13", 128)));
    // Outer index steps by d1, inner by d2.
    EXPECT_TRUE(A[1].contains(dec("-1.5", "7", 128)));
    EXPECT_TRUE(A[4].contains(dec("-0.5", "6", 128)));
}

TEST(PointSets, GridSinglePoint) {
    const PointSet A = grid(lit("0.3+2i"), lit("1"), lit("0+1i"), 0, 0, 64);
    ASSERT_EQ(A.size(), 1u);
    EXPECT_TRUE(A[0].overlaps(dec("0.3", "2", 64)));
}

TEST(PointSets, GridCollisionIsDegenerate) {
    EXPECT_EQ(code_of([] { (void)grid(lit("0"), lit("1"), lit("1"), 1, 1, 64); }), ErrorCode::DegenerateSet);
}

TEST(PointSets, ReferenceCircle) {
    const PointSet A = circle(lit("0.5+7i"), lit("3+2i"), 12, 128);
    ASSERT_EQ(A.size(), 12u);
    EXPECT_TRUE(A[0].contains(dec("3.5", "9", 128)));
    EXPECT_TRUE(A[3].overlaps(dec("-1.5", "10", 128)));  // c + r i
}

TEST(PointSets, CircleSmallCases) {
    const PointSet one = circle(lit("1+1i"), lit("2"), 1, 64);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_TRUE(one[0].contains(dec("3", "1", 64)));
    const PointSet four = circle(lit("0"), lit("1"), 4, 64);
    const Ball want[] = {Ball::from_int(1, 0, 64), Ball::from_int(0, 1, 64), Ball::from_int(-1, 0, 64),
                         Ball::from_int(0, -1, 64)};
    for (int k = 0; k < 4; ++k) {
        EXPECT_TRUE(four[k].contains(want[k])) << k;
    }
}

TEST(PointSets, Progression) {
    const PointSet p = progression(lit("0"), lit("1"), 3, 64);
    ASSERT_EQ(p.size(), 3u);
    for (int k = 0; k < 3; ++k) {
        EXPECT_TRUE(p[k].contains(Ball(k, 64)));
    }
    EXPECT_EQ(progression(lit("0.4+17i"), lit("1e-3"), 1, 64).size(), 1u);
    const PointSet q = progression(lit("0.4+17i"), lit("1e-3"), 12, 200);
    EXPECT_TRUE(near(q[11], dec("0.411", "17", 200)));
}

TEST(PointSets, RandomGolden) {
    // splitmix64 from seed 1, top 53 bits scaled by 2^-53, (re, im) per point.
    const PointSet A = random_set(1, {"0", "1", "0", "1"}, 3, 128);
    ASSERT_EQ(A.size(), 3u);
    EXPECT_TRUE(near(A[0], dec("0.5665615751722808957069333", "0.7457817572627011282193621", 128), 1e-24));
    EXPECT_TRUE(near(A[1], dec("0.9710027535867962189541913", "0.4443592170557720821832959", 128), 1e-24));
    EXPECT_TRUE(near(A[2], dec("0.4442647008263580499232148", "0.7628943919117610050761868", 128), 1e-24));
}

TEST(PointSets, RandomIsDeterministicAndInsideTheBox) {
    const PointSet A = random_set(42, {"0.2", "3", "-30", "30"}, 20, 128);
    const PointSet B = random_set(42, {"0.2", "3", "-30", "30"}, 20, 128);
    ASSERT_EQ(A.size(), 20u);
    for (std::size_t i = 0; i < A.size(); ++i) {
        EXPECT_EQ(A[i].serialize(), B[i].serialize());
        const double re = mpfr_get_d(A[i].mid_re().get(), MPFR_RNDN);
        const double im = mpfr_get_d(A[i].mid_im().get(), MPFR_RNDN);
        EXPECT_GE(re, 0.2);
        EXPECT_LE(re, 3.0);
        EXPECT_LE(std::abs(im), 30.0);
    }
    EXPECT_EQ(random_set(5, {"0", "1", "0", "1"}, 1, 64).size(), 1u);
}

TEST(PointSets, DescriptorsRoundTrip) {
    for (const char* d : {"grid:-2.5+5i;2+1i;1+2i;2;3", "circle:0.5+7i;3+2i;12", "prog:0.4+17i;1e-3;12",
                          "random:7;0,1,-2,2;5", "explicit:1+1i;2;0.5-3i"}) {
        const PointSet A = PointSet::parse(d, 128);
        EXPECT_EQ(A.descriptor(), d);
        const PointSet B = PointSet::parse(A.descriptor(), 256);
        ASSERT_EQ(A.size(), B.size());
        for (std::size_t i = 0; i < A.size(); ++i) {
            EXPECT_TRUE(A[i].contains(B[i])) << d << " point " << i;
        }
    }
}

TEST(PointSets, PrecisionRegeneration) {
    const PointSet A = PointSet::parse("circle:0.5+7i;3+2i;12", 64);
    const PointSet B = A.at_prec(512);
    EXPECT_EQ(B.prec(), 512);
    for (std::size_t i = 0; i < A.size(); ++i) {
        EXPECT_TRUE(A[i].contains(B[i]));
        // Quarter-turn points are exact at any precision.
        if (i % 3 == 0) {
            EXPECT_TRUE(B[i].rad() == Mag());
        } else {
            EXPECT_LT(B[i].rad(), A[i].rad());
        }
    }
}

TEST(PointSets, BadDescriptorsAreUsageErrors) {
    for (const char* d : {"grid:bad", "nope:1", "circle:1;2", "random:x;0,1,0,1;3", "grid"}) {
        EXPECT_EQ(code_of([&] { (void)PointSet::parse(d, 64); }), ErrorCode::UsageError) << d;
    }
}
