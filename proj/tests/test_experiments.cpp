#include <gmpxx.h>

#include "etalab/experiments.hpp"
#include "support.hpp"

using namespace etalab;
using etalab::testing::dec;
using etalab::testing::near;
using etalab::testing::overlap;

namespace {

constexpr const char* kGrid = "grid:-2.5+5i;2+1i;1+2i;2;3";
constexpr const char* kCircle = "circle:0.5+7i;3+2i;12";

class Experiments : public ::testing::Test {
protected:
    DerivProvider provider;
    Session session() { return Session{&provider, AccuracyTarget(20), std::nullopt}; }
    static PointSet set(const char* d) { return PointSet::parse(d, 64); }
    static ComplexLiteral lit(const char* s) { return ComplexLiteral::parse(s); }

    Ball eta(const char* a, int k) {
        const Ball p = lit(a).to_ball(1024);
        return provider.get(p, k, 30)->at(k);
    }
};

Ball factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Ball::from_mpz(f, 256);
}

bool decreasing(const std::vector<Ball>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i].abs_upper() < v[i - 1].abs_lower())) {
            return false;
        }
    }
    return true;
}

}  // namespace

// mpmath at 130 digits.
TEST_F(Experiments, ReferenceConstantOfTheGrid) {
    const Session s{&provider, AccuracyTarget(40), std::nullopt};
    const Measured<Ball> q = q_ratio(set(kGrid), IndexSeq(), s);
    EXPECT_TRUE(q.reached);
    EXPECT_TRUE(near(q.value,
                     dec("0.9999999999999943099552779744989908781155891571172457349683358811598043",
                         "0.00000000000000951329600849516775160034023592987796843255392046248364593034616904309", 512),
                     1e-45));
}

TEST_F(Experiments, ReferenceConstantOfTheCircle) {
    const Measured<Ball> q = q_ratio(set(kCircle), IndexSeq(), session());
    EXPECT_TRUE(near(q.value, dec("1.0000000000000063710979182757344226", "3.070321978338419086519889050657709e-14"),
                     1e-20));
}

TEST_F(Experiments, LinearFamilyAgreesWithQ) {
    for (const char* d : {kGrid, kCircle}) {
        const Measured<LinearSolution> sol = solve_linear_family(set(d), IndexSeq(), 0, session());
        EXPECT_TRUE(sol.value.consistent());
        EXPECT_TRUE(overlap(sol.value.b, q_ratio(set(d), IndexSeq(), session()).value));
        EXPECT_EQ(sol.value.c.size(), 11u);
    }
}

TEST_F(Experiments, SinglePointSystems) {
    const PointSet one = set("explicit:0.5+9i");
    const Ball e = eta("0.5+9i", 0);
    EXPECT_TRUE(overlap(solve_linear_family(one, IndexSeq(), 0, session()).value.b, e));
    EXPECT_TRUE(overlap(q_ratio(one, IndexSeq(), session()).value, e));
    EXPECT_TRUE(r_value(1, 0, 0, one, session()).value.contains_zero());
}

TEST_F(Experiments, LeavingOutColumnOrdersMovesQAway) {
    const PointSet A = set("circle:0.6+14i;10;20");
    std::vector<Ball> d;
    for (const std::set<int>& drop : {std::set<int>{}, std::set<int>{1}, std::set<int>{1, 2}}) {
        d.push_back(dist_to_one(q_ratio(A, IndexSeq::missing(drop), session()).value));
    }
    EXPECT_TRUE(d[0].abs_upper() < Mag::from_double_down(1e-6));
    EXPECT_TRUE(d[0].abs_upper() < d[1].abs_lower());
    EXPECT_TRUE(d[1].abs_upper() < d[2].abs_lower());
}

TEST_F(Experiments, QnEndpoints) {
    const auto qn = qn_ratios(set(kGrid), session()).value;
    ASSERT_EQ(qn.size(), 13u);
    ASSERT_TRUE(qn[0] && qn[12]);
    EXPECT_TRUE(overlap(*qn[0], q_ratio(set(kGrid), IndexSeq(), session()).value));
    EXPECT_TRUE(qn[12]->contains(Ball(1, 64)));
    ASSERT_TRUE(qn[1]);
    EXPECT_LT(dist_to_one(*qn[1]).abs_upper(), Mag::from_double_down(1e-6));
}

TEST_F(Experiments, RValuesNearTheirTargets) {
    const PointSet A = set(kGrid);
    for (auto [l, m, n] : {std::tuple{1, 0, 0}, std::tuple{3, 5, 2}, std::tuple{11, 11, 11}}) {
        const Ball r = r_value(l, m, n, A, session()).value;
        const Ball t = provider.get(Workbench(provider, 256).points(A)[m], l + n, 20)->at(l + n);
        EXPECT_LT(rel_dist(r, t).abs_upper(), Mag::from_double_down(1e-7)) << l << m << n;
    }
}

TEST_F(Experiments, R1yNearDerivative) {
    const PointSet A = set(kGrid);
    const Ball y = r1y_value(A, 0, 1, session()).value;
    EXPECT_LT(rel_dist(y, eta("-2.5+5i", 1)).abs_upper(), Mag::from_double_down(1e-8));
    const Ball y0 = r1y_value(A, 2, 0, session()).value;
    const Ball a2 = Workbench(provider, 256).points(A)[2];
    EXPECT_LT(rel_dist(y0, provider.get(a2, 0, 20)->at(0)).abs_upper(), Mag::from_double_down(1e-8));
}

TEST_F(Experiments, SnLadderDecreases) {
    // |S_30 - 1| is near 1e-43, so the ratio needs more than 43 digits.
    const Session fine{&provider, AccuracyTarget(60), std::nullopt};
    std::vector<Ball> d;
    for (int N : {5, 10, 20, 30}) {
        d.push_back(dist_to_one(s_n(lit("0.4+17i"), N, SnVariant::plain, fine).value));
    }
    EXPECT_TRUE(decreasing(d));
    // Independent mpmath evaluation of the 5 x 5 over 4 x 4 Hankel ratio.
    const Ball s5 = s_n(lit("0.4+17i"), 5, SnVariant::plain, session()).value;
    EXPECT_TRUE(near(s5, dec("1.0001514289124508324667311306721825", "0.00017981649259599987179998123666782425"), 1e-19));
}

TEST_F(Experiments, SnOfOneIsEta) {
    EXPECT_TRUE(overlap(s_n(lit("0.4+17i"), 1, SnVariant::plain, session()).value, eta("0.4+17i", 0)));
}

TEST_F(Experiments, FactorialScalingIdentities) {
    for (int N : {3, 6, 9}) {
        const Ball plain = s_n(lit("0.4+17i"), N, SnVariant::plain, session()).value;
        const Ball fact = s_n(lit("0.4+17i"), N, SnVariant::fact, session()).value;
        const Ball anti = s_n(lit("0.4+17i"), N, SnVariant::antifact, session()).value;
        EXPECT_TRUE(overlap(fact * factorial(N - 1), plain)) << N;
        EXPECT_TRUE(overlap(anti, plain * factorial(N - 1))) << N;
    }
    EXPECT_NO_THROW((void)s_n(lit("0.4+17i"), 6, SnVariant::taylor, session()));
}

TEST_F(Experiments, MinorWithNothingRemovedIsPlain) {
    for (int N : {4, 12}) {
        const Ball plain = s_n(lit("0.4+16i"), N, SnVariant::plain, session()).value;
        const Ball minor = s_n(lit("0.4+16i"), N, SnVariant::minor, session()).value;
        EXPECT_TRUE(overlap(plain, minor));
    }
}

TEST_F(Experiments, EPolyDegreeFormula) {
    const int N = 5;
    for (int m = 0; m <= 2 * N - 2; ++m) {
        const PolyHP E = e_poly(1, m, N, lit("0.4+17i"), session()).value;
        EXPECT_EQ(E.degree(), std::min(m + 1, 2 * N - m - 1)) << m;
    }
    EXPECT_EQ(e_poly(1, 2, 6, lit("0.5+7i"), session()).value.degree(), 3);
}

TEST_F(Experiments, Conj3FirstRatioIsTheLinearRoot) {
    for (int l : {1, 3}) {
        const PolyHP E = e_poly(l, 0, 8, lit("0.4+17i"), session()).value;
        ASSERT_EQ(E.degree(), 1);
        const Ball r = conj3_ratio(l, 0, 8, 1, lit("0.4+17i"), session()).value;
        EXPECT_TRUE(overlap(r, -E[0] / E[1]));
    }
}

TEST_F(Experiments, Conj2RootsClusterAroundTheDerivative) {
    std::vector<Ball> spread;
    for (int N : {10, 20}) {
        const RootSpread r = conj2_root_spread(1, 2, N, lit("0.4+17i"), session()).value;
        EXPECT_EQ(r.roots.size(), 3u);
        spread.push_back(r.spread);
    }
    EXPECT_TRUE(decreasing(spread));
    EXPECT_LT(spread.back().abs_upper(), Mag::from_double_down(1e-10));
    const RootSpread one = conj2_root_spread(1, 0, 1, lit("0.4+17i"), session()).value;
    ASSERT_EQ(one.roots.size(), 1u);
}

TEST_F(Experiments, E1RootsNearDerivative) {
    const E1Result e = e1_poly(2, 15, lit("0.5+9i"), session()).value;
    ASSERT_FALSE(e.roots.empty());
    const Ball t = eta("0.5+9i", 2);
    for (const Ball& r : e.roots) {
        EXPECT_LT(rel_dist(r, t).abs_upper(), Mag::from_double_down(1e-8));
    }
    EXPECT_EQ(e1_poly(0, 6, lit("0.5+9i"), session()).value.poly.degree(), 1);
}

TEST_F(Experiments, R3eqApproachesEta) {
    EXPECT_TRUE(r3eq_solution(lit("0.4+17i"), 1, session()).value.contains(Ball(1, 64)));
    const Ball e = eta("0.4+17i", 0);
    const Ball d10 = rel_dist(r3eq_solution(lit("0.4+17i"), 10, session()).value, e);
    const Ball d20 = rel_dist(r3eq_solution(lit("0.4+17i"), 20, session()).value, e);
    EXPECT_TRUE(d20.abs_upper() < d10.abs_lower());
    EXPECT_LT(d20.abs_upper(), Mag::from_double_down(1e-20));
}

TEST_F(Experiments, GencharDegreeZeroIsTheExplicitRatio) {
    const int l = 2;
    const int N = 8;
    const auto v = genchar_ratios(l, N, Permutation::identity(N), lit("0.7+19i"), session(), 0).value;
    ASSERT_TRUE(v.at(0));
    const PolyHP E = e_poly(l, 0, N, lit("0.7+19i"), session()).value;
    EXPECT_TRUE(overlap(*v[0], -E[0] / E[1]));
}

TEST_F(Experiments, GencharQOneMatchesIdentity) {
    const auto a = genchar_ratios(2, 10, perm_qr(1, 2, 10), lit("0.7+19i"), session(), 2).value;
    const auto b = genchar_ratios(2, 10, Permutation::identity(10), lit("0.7+19i"), session(), 2).value;
    for (int n = 0; n <= 2; ++n) {
        ASSERT_TRUE(a[n] && b[n]);
        EXPECT_TRUE(overlap(*a[n], *b[n]));
    }
}

TEST_F(Experiments, CharpolyMinorDegreeZeroIsR) {
    const PointSet A = set(kGrid);
    const auto v = charpoly_minor_ratios(1, 0, 0, A, session(), 0).value;
    ASSERT_TRUE(v.at(0));
    const Ball r = r_value(1, 0, 0, A, session()).value;
    EXPECT_TRUE(v[0]->overlaps(r) || v[0]->overlaps(-r));
}

TEST_F(Experiments, LimitDifferenceIsFirstOrder) {
    const Ball d1 = limit_check(lit("0.4+17i"), lit("1e-3"), 12, session()).value.diff;
    const Ball d2 = limit_check(lit("0.4+17i"), lit("5e-4"), 12, session()).value.diff;
    const double ratio = (d1 / d2).abs_upper().to_double();
    EXPECT_GT(ratio, 1.5);
    EXPECT_LT(ratio, 2.5);
    EXPECT_LT(d1.abs_upper(), Mag::from_double_down(1e-12));
}

TEST_F(Experiments, FixedPrecisionIsASingleAttempt) {
    const Session s{&provider, AccuracyTarget(20), Prec{128}};
    const Measured<Ball> q = q_ratio(set(kGrid), IndexSeq(), s);
    EXPECT_EQ(q.prec, 128);
}

TEST_F(Experiments, RunExperimentRowsAndErrors) {
    ExperimentParams p;
    p.a = lit("0.4+17i");
    p.N = 10;
    p.variant = "plain";
    const ExperimentResult r = run_experiment("sn", p, session());
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].label, "S");
    EXPECT_TRUE(r.rows[0].delta.has_value());
    EXPECT_FALSE(r.inconclusive());
    EXPECT_GE(r.digits, 20);

    try {
        (void)run_experiment("sn", ExperimentParams{}, session());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UsageError);
        EXPECT_NE(std::string(e.what()).find("--a"), std::string::npos);
    }
    EXPECT_THROW((void)run_experiment("nonsense", p, session()), Error);
    EXPECT_EQ(experiment_names().size(), 15u);
}

TEST_F(Experiments, EveryExperimentRunsOnSmallInputs) {
    ExperimentParams p;
    p.a = lit("0.4+17i");
    p.set = "circle:0.5+7i;3+2i;4";
    p.N = 4;
    p.l = 1;
    p.m = 1;
    p.n = 1;
    p.eps = lit("1e-3");
    for (const auto& name : experiment_names()) {
        const ExperimentResult r = run_experiment(name, p, session());
        EXPECT_FALSE(r.rows.empty()) << name;
        EXPECT_EQ(r.name, name);
    }
}
