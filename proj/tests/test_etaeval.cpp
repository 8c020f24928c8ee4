#include <filesystem>
#include <fstream>

#include "etalab/cache.hpp"
#include "etalab/etaeval.hpp"
#include "etalab/experiments.hpp"
#include "support.hpp"

using namespace etalab;
using etalab::testing::dec;
using etalab::testing::near;
using etalab::testing::overlap;

namespace {

struct Golden {
    const char* re;
    const char* im;
};

// mpmath at 80 digits, eta^(k) = sum binom(k,i) f^(i) zeta^(k-i), f = 1 - 2^(1-s).
const Golden kEta05_14[] = {
    {"0.012220891770754763065992914334065007", "-0.25229976665289983320261863784549672"},
    {"1.8520410464873864621282102016757513", "0.2939595245572241028813585914356737"},
    {"-2.9792592468051562420632296404524321", "-0.51393322235228157419377270979040014"},
    {"4.54635726058204939826890860369555", "1.0783167781925148996132191552027101"},
    {"-6.7777380254775431398147508719319841", "-2.3105037720618887611574669843155178"},
};
const Golden kEtaM25_5[] = {
    {"2.7420186089974526931505614366552853", "6.2003016295074120066750430352612076"},
    {"1.7775566264645378984750963448954381", "-5.2624635034550188916527223021880194"},
    {"-4.5456235234069049660497395445878622", "3.2006828930588403065129921890715487"},
};
const Golden kEta3_m25[] = {
    {"0.97274367559748918985346415751504941", "0.14774418103620033564612025300812973"},
    {"0.030057953728375853467099072623311842", "-0.10583681408099083711937540009407808"},
    {"-0.038061989511946039078476978173822134", "0.068452607367028215066802245525478493"},
};
const Golden kZeta05_14[] = {
    {"0.022241142609993589246213199203968626", "-0.10325812326645005790236309555257383"},
    {"0.74823369612008626252915992314160343", "0.20443653378499741947168285073882971"},
    {"-0.56836736669755830341261173369593061", "-0.28948411433979624947130620655403473"},
};

template <std::size_t N>
void expect_golden(const DerivVector& v, const Golden (&g)[N]) {
    for (std::size_t k = 0; k < N; ++k) {
        EXPECT_TRUE(near(v.at(static_cast<int>(k)), dec(g[k].re, g[k].im))) << "order " << k;
    }
}

Ball pi2_over(long d) { return Ball::pi(256).sqr().div_si(d); }

}  // namespace

TEST(EtaEval, GoldenNearCriticalLine) {
    const DerivVector v = eta_derivs(dec("0.5", "14"), 4, AccuracyTarget(30));
    EXPECT_EQ(v.method(), Method::euler_maclaurin);
    EXPECT_GE(v.min_accuracy_digits(), 30);
    expect_golden(v, kEta05_14);
    expect_golden(eta_derivs_direct(dec("0.5", "14"), 4, AccuracyTarget(30)), kEta05_14);
}

TEST(EtaEval, GoldenLeftHalfPlane) {
    expect_golden(eta_derivs(dec("-2.5", "5"), 2, AccuracyTarget(30)), kEtaM25_5);
}

TEST(EtaEval, GoldenLowerHalfPlane) {
    expect_golden(eta_derivs(dec("3", "-25"), 2, AccuracyTarget(30)), kEta3_m25);
    expect_golden(eta_derivs_direct(dec("3", "-25"), 2, AccuracyTarget(30)), kEta3_m25);
}

TEST(EtaEval, TenthDerivativeGolden) {
    const DerivVector v = eta_derivs(dec("0.5", "14"), 10, AccuracyTarget(30));
    EXPECT_TRUE(near(v.at(10), dec("-25.534763545684599017244757331989215", "-117.04297016265237728488299176649019")));
}

TEST(EtaEval, ClassicalValues) {
    const AccuracyTarget t(30);
    EXPECT_TRUE(eta_derivs(Ball(0, 256), 0, t).at(0).overlaps(dec("0.5")));
    EXPECT_TRUE(eta_derivs(Ball(1, 256), 0, t).at(0).overlaps(Ball::ln2(256)));
    EXPECT_TRUE(eta_derivs(Ball(2, 256), 0, t).at(0).overlaps(pi2_over(12)));
    EXPECT_TRUE(eta_derivs_direct(Ball(2, 256), 0, t).at(0).overlaps(pi2_over(12)));
    const Ball l2 = Ball::ln2(256);
    const Ball d1 = Ball::euler_gamma(256) * l2 - l2.sqr().div_si(2);
    EXPECT_TRUE(eta_derivs_direct(Ball(1, 256), 1, t).at(1).overlaps(d1));
    EXPECT_TRUE(eta_derivs(Ball(1, 256), 1, t).at(1).overlaps(d1));
}

TEST(EtaEval, DirectNeedsPositiveRealPart) {
    try {
        (void)eta_derivs_direct(dec("-0.5", "3"), 2, AccuracyTarget(20));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
}

TEST(EtaEval, OrderCap) { EXPECT_THROW((void)eta_derivs(dec("0.5", "3"), kMaxOrder + 1, AccuracyTarget(10)), Error); }

TEST(ZetaEval, ClassicalValues) {
    const AccuracyTarget t(30);
    EXPECT_TRUE(zeta_series_em(Ball(2, 256), 0, t).coeffs[0].overlaps(pi2_over(6)));
    EXPECT_TRUE(zeta_series_em(Ball(-1, 256), 0, t).coeffs[0].overlaps(Ball(-1, 256) / Ball(12, 256)));
    EXPECT_TRUE(zeta_from_eta(eta_derivs(Ball(2, 256), 0, t)).at(0).overlaps(pi2_over(6)));
}

TEST(ZetaEval, GoldenNearCriticalLine) {
    expect_golden(zeta_derivs(dec("0.5", "14"), 2, AccuracyTarget(30)), kZeta05_14);
    expect_golden(zeta_from_eta(eta_derivs(dec("0.5", "14"), 2, AccuracyTarget(30))), kZeta05_14);
}

TEST(ZetaEval, FactorVanishesOnItsZeros) {
    const Prec p = 256;
    const Ball a = Ball(1, p) + Ball::from_int(0, 2, p) * Ball::pi(p) / Ball::ln2(p);
    // eta vanishes there as well, so the values are supplied directly.
    const DerivVector v(a, {Ball(p), Ball(p)}, Function::eta, Method::direct_accelerated, 20);
    try {
        (void)zeta_from_eta(v);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FactorVanishes);
    }
}

TEST(EtaEval, MethodsAgreeAtOrder22) {
    const Ball a = dec("0.4", "17", 1024);
    const int digits = 30;
    const DerivVector em = eta_derivs(a, 22, AccuracyTarget(digits));
    const DerivVector direct = eta_derivs_direct(a, 22, AccuracyTarget(digits));
    for (int k = 0; k <= 22; ++k) {
        EXPECT_TRUE(overlap(em.at(k), direct.at(k))) << k;
        const Ball d = (em.at(k) - direct.at(k)).abs();
        EXPECT_LE(d.abs_upper(), mul_up(direct.at(k).abs_upper(), Mag::from_double_up(1e-28))) << k;
    }
}

TEST(EtaEval, MethodsAgreeAtOrder11) {
    const Ball a = dec("0.5", "7", 512);
    const DerivVector em = eta_derivs(a, 11, AccuracyTarget(25));
    const DerivVector direct = eta_derivs_direct(a, 11, AccuracyTarget(25));
    for (int k = 0; k <= 11; ++k) {
        EXPECT_TRUE(overlap(em.at(k), direct.at(k))) << k;
    }
}

TEST(ZetaEval, HighOrderSeriesMatchesDirectThroughRelation) {
    const Ball a = dec("0.4", "17", 2048);
    const TruncatedSeries z = zeta_series_em(a, 99, AccuracyTarget(60));
    const auto zd = z.derivatives();
    for (const Ball& c : zd) {
        EXPECT_GE(c.accuracy_digits(), 60);
    }
    const DerivVector via = zeta_from_eta(eta_derivs_direct(a, 99, AccuracyTarget(60)));
    for (int k = 0; k <= 99; k += 7) {
        EXPECT_TRUE(overlap(zd[k], via.at(k))) << k;
    }
}

TEST(EtaEval, RoundTripThroughZeta) {
    const Ball a = dec("0.7", "9", 1024);
    const int K = 8;
    const DerivVector eta = eta_derivs(a, K, AccuracyTarget(30));
    const DerivVector zeta = zeta_from_eta(eta);
    const Prec p = 256;
    const TruncatedSeries f{a, kernel::eta_factor_series(a, K, p)};
    for (int k = 0; k <= K; ++k) {
        Ball sum(p);
        Ball binom(1, p);
        for (int i = 0; i <= k; ++i) {
            sum += binom * f.derivative(i) * zeta.at(k - i);
            binom = binom.mul_si(k - i).div_si(i + 1);
        }
        EXPECT_TRUE(overlap(sum, eta.at(k))) << k;
    }
}

TEST(EtaEval, TaylorConsistency) {
    const Ball a = dec("1.5", "-11", 1024);
    const int K = 6;
    const Prec p = 256;
    const TruncatedSeries z = zeta_series_em(a, K, AccuracyTarget(30));
    const std::vector<Ball> f = kernel::eta_factor_series(a, K, p);
    const DerivVector eta = eta_derivs(a, K, AccuracyTarget(30));
    Ball fact(1, p);
    for (int k = 0; k <= K; ++k) {
        Ball c(p);
        for (int i = 0; i <= k; ++i) {
            c += f[i] * z.coeffs[k - i];
        }
        if (k > 0) {
            fact = fact.mul_si(k);
        }
        EXPECT_TRUE(overlap(c * fact, eta.at(k))) << k;
    }
}

// ---------------------------------------------------------------- cache

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto d = std::filesystem::path(::testing::TempDir()) / ("etalab_" + name);
    std::filesystem::remove_all(d);
    return d;
}

}  // namespace

TEST(Cache, PutThenGetIsIdentical) {
    DerivCache cache(fresh_dir("roundtrip"));
    const DerivVector v = eta_derivs(dec("0.5", "14"), 5, AccuracyTarget(25));
    cache.put(v);
    const auto got = cache.get(CacheKey::of(v));
    ASSERT_TRUE(got.has_value());
    ASSERT_EQ(got->order(), v.order());
    for (int k = 0; k <= v.order(); ++k) {
        EXPECT_EQ(got->at(k).serialize(), v.at(k).serialize());
    }
    EXPECT_EQ(got->method(), v.method());
    EXPECT_EQ(cache.list().size(), 1u);
}

TEST(Cache, UnknownKeyMisses) {
    DerivCache cache(fresh_dir("miss"));
    EXPECT_FALSE(cache.get(CacheKey::of(Ball(2, 64), Function::eta, Method::euler_maclaurin, 3, 20)).has_value());
    EXPECT_TRUE(cache.list().empty());
}

TEST(Cache, TruncatedFileIsCorruptOnceThenMiss) {
    const auto dir = fresh_dir("corrupt");
    DerivCache cache(dir);
    const DerivVector v = eta_derivs(dec("2", "1"), 3, AccuracyTarget(20));
    cache.put(v);
    ASSERT_EQ(cache.list().size(), 1u);
    const auto file = dir / cache.list().front().name;
    const auto size = std::filesystem::file_size(file);
    std::filesystem::resize_file(file, size / 2);
    try {
        (void)cache.get(CacheKey::of(v));
        FAIL() << "expected CacheCorrupt";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CacheCorrupt);
    }
    EXPECT_FALSE(cache.get(CacheKey::of(v)).has_value());
    EXPECT_TRUE(cache.list().empty());
}

TEST(Cache, ClearEmptiesTheDirectory) {
    DerivCache cache(fresh_dir("clear"));
    cache.put(eta_derivs(dec("2", "1"), 2, AccuracyTarget(20)));
    cache.put(eta_derivs(dec("2", "2"), 2, AccuracyTarget(20)));
    EXPECT_EQ(cache.list().size(), 2u);
    EXPECT_EQ(cache.clear(), 2u);
    EXPECT_TRUE(cache.list().empty());
}

TEST(Cache, KeyUsesExactMidpoint) {
    const CacheKey a = CacheKey::of(dec("0.1", "0", 64), Function::eta, Method::euler_maclaurin, 3, 20);
    const CacheKey b = CacheKey::of(dec("0.1", "0", 200), Function::eta, Method::euler_maclaurin, 3, 20);
    EXPECT_NE(a.canonical(), b.canonical());
    EXPECT_EQ(a, CacheKey::of(dec("0.1", "0", 64), Function::eta, Method::euler_maclaurin, 3, 20));
}

TEST(Cache, ProviderReadsWhatAnotherProviderWrote) {
    const auto dir = fresh_dir("provider");
    const Ball a = dec("0.5", "9", 512);
    {
        DerivProvider p(Function::eta, dir);
        (void)p.get(a, 6, 25);
        EXPECT_EQ(p.computed(), 1u);
        (void)p.get(a, 4, 20);
        EXPECT_EQ(p.computed(), 1u);
    }
    DerivProvider q(Function::eta, dir);
    const auto v = q.get(a, 6, 25);
    EXPECT_EQ(q.computed(), 0u);
    EXPECT_EQ(q.disk_hits(), 1u);
    EXPECT_GE(v->min_accuracy_digits(), 25);
}
