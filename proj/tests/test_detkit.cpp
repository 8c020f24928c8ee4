#include <algorithm>
#include <numeric>
#include <random>

#include "etalab/detkit.hpp"
#include "etalab/etaeval.hpp"
#include "support.hpp"

using namespace etalab;
using etalab::testing::dec;
using etalab::testing::overlap;

namespace {

constexpr Prec kP = 192;

BallMatrix from_ints(const std::vector<std::vector<long>>& rows) {
    BallMatrix M(static_cast<int>(rows.size()), kP);
    for (int j = 0; j < M.size(); ++j) {
        for (int k = 0; k < M.size(); ++k) {
            M(j, k) = Ball(rows[j][k], kP);
        }
    }
    return M;
}

BallMatrix random_matrix(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2, 2);
    BallMatrix M(n, kP);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            M(j, k) = Ball::from_double(u(rng), u(rng), kP).with_added_rad(Mag::pow2(-100));
        }
    }
    return M;
}

Ball laplace(const BallMatrix& M) {
    if (M.size() == 0) {
        return Ball(1, kP);
    }
    Ball s(kP);
    for (int k = 0; k < M.size(); ++k) {
        const Ball t = M(0, k) * laplace(M.minor(0, k));
        s = (k % 2) ? s - t : s + t;
    }
    return s;
}

int brute_sign(const std::vector<int>& g) {
    int inv = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            inv += g[i] > g[j];
        }
    }
    return inv % 2 ? -1 : 1;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

// Symbolic-free matrix with explicit entries, for det_poly tests.
MatrixHP hp_from(const BallMatrix& c, const std::vector<std::pair<int, int>>& y_cells) {
    MatrixHP M(c.size(), Symbol::y, kP);
    for (int j = 0; j < c.size(); ++j) {
        for (int k = 0; k < c.size(); ++k) {
            M.c(j, k) = c(j, k);
            M.u(j, k) = Ball(0, kP);
        }
    }
    for (auto [j, k] : y_cells) {
        M.c(j, k) = Ball(0, kP);
        M.u(j, k) = Ball(1, kP);
    }
    return M;
}

}  // namespace

TEST(Permutation, SignMatchesInversionCountUpToEight) {
    for (int n = 1; n <= 8; ++n) {
        std::vector<int> g(n);
        std::iota(g.begin(), g.end(), 0);
        do {
            EXPECT_EQ(Permutation(g).sign(), brute_sign(g));
        } while (std::next_permutation(g.begin(), g.end()));
    }
}

TEST(Permutation, RejectsNonBijections) {
    EXPECT_THROW(Permutation({0, 0, 1}), Error);
    EXPECT_THROW(Permutation({0, 3}), Error);
}

TEST(Permutation, PermQr) {
    EXPECT_EQ(perm_qr(2, 1, 4).images(), (std::vector<int>{0, 2, 1, 3}));
    EXPECT_TRUE(perm_qr(1, 1, 7).is_identity());
    EXPECT_EQ(code_of([] { (void)perm_qr(4, 2, 6); }), ErrorCode::NotCoprime);
}

TEST(IndexSeq, FullListedMissing) {
    const IndexSeq full;
    EXPECT_EQ(full[5], 5);
    EXPECT_TRUE(full.is_full());
    const IndexSeq m = IndexSeq::missing({1, 2});
    EXPECT_EQ(m[0], 0);
    EXPECT_EQ(m[1], 3);
    EXPECT_EQ(m[2], 4);
    EXPECT_EQ(m.tail()[0], 3);
    EXPECT_EQ(IndexSeq::listed({0, 4, 9})[2], 9);
    EXPECT_TRUE(IndexSeq::missing({}).is_full());
}

TEST(Rules, FirstMatchWins) {
    RuleSet r;
    r.add(Selector::cell(0, 0), Payload::constant(Ball(7, kP))).add(Selector::all(), Payload::constant(Ball(3, kP)));
    const MatrixHP M = build_matrix(3, r, BuildEnv{{}, 0, {}, {}, kP});
    EXPECT_TRUE(M.c(0, 0).contains(Ball(7, kP)));
    EXPECT_TRUE(M.c(0, 1).contains(Ball(3, kP)));
    EXPECT_TRUE(M.c(2, 2).contains(Ball(3, kP)));
}

TEST(Rules, UncoveredCell) {
    RuleSet r;
    r.add(Selector::row(0), Payload::one());
    EXPECT_EQ(code_of([&] { (void)build_matrix(2, r, BuildEnv{{}, 0, {}, {}, kP}); }), ErrorCode::UncoveredCell);
}

TEST(Rules, SelectorsAndText) {
    EXPECT_TRUE(Selector::antidiag(3).matches(1, 2));
    EXPECT_FALSE(Selector::antidiag(3).matches(1, 1));
    EXPECT_TRUE(Selector::antidiag(3, 2).matches(0, 1));
    const Selector pd = Selector::permdiag(perm_qr(2, 1, 4));
    EXPECT_TRUE(pd.matches(2, 1));
    EXPECT_FALSE(pd.matches(1, 1));
    RuleSet r;
    r.add(Selector::col(0), Payload::one()).add(Selector::all(), Payload::eta(0, 1));
    EXPECT_FALSE(r.to_string().empty());
    EXPECT_NE(r.to_string().find("->"), std::string::npos);
}

TEST(Rules, EtaPayloadsAndOnesColumn) {
    const DerivVector v = eta_derivs(dec("0.5", "7", 512), 6, AccuracyTarget(20));
    RuleSet r;
    r.add(Selector::col(0), Payload::one()).add(Selector::all(), Payload::eta(1, 1));
    const MatrixHP M = build_matrix(3, r, BuildEnv{{&v}, 0, {}, {}, kP});
    for (int j = 0; j < 3; ++j) {
        EXPECT_TRUE(M.c(j, 0).contains(Ball(1, kP)));
        for (int k = 1; k < 3; ++k) {
            EXPECT_TRUE(overlap(M.c(j, k), v.at(j + k)));
        }
    }
    RuleSet y;
    y.add(Selector::cell(0, 0), Payload::y()).add(Selector::all(), Payload::eta(1, 1));
    const MatrixHP Y = build_matrix(3, y, BuildEnv{{&v}, 0, {}, {}, kP});
    EXPECT_TRUE(Y.has_symbol(0, 0));
    EXPECT_FALSE(Y.has_symbol(1, 0));
    EXPECT_THROW((void)Y.numeric(), Error);
}

TEST(Det, SmallCases) {
    EXPECT_TRUE(det(from_ints({{5}})).contains(Ball(5, kP)));
    EXPECT_TRUE(det(from_ints({{2, 3}, {4, 5}})).contains(Ball(-2, kP)));
    EXPECT_TRUE(det(BallMatrix(0, kP)).contains(Ball(1, kP)));
    EXPECT_TRUE(det(from_ints({{1, 2}, {2, 4}})).contains_zero());
}

TEST(Det, MatchesCofactorExpansion) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 5; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const BallMatrix M = random_matrix(n, rng);
            EXPECT_TRUE(overlap(det(M), laplace(M))) << n;
        }
    }
}

TEST(Charpoly, TwoByTwo) {
    const PolyHP c = charpoly(from_ints({{2, 3}, {4, 5}}));
    ASSERT_EQ(c.degree(), 2);
    EXPECT_TRUE(c[0].contains(Ball(-2, kP)));
    EXPECT_TRUE(c[1].contains(Ball(-7, kP)));
    EXPECT_TRUE(c[2].contains(Ball(1, kP)));
}

TEST(Charpoly, Tridiagonal) {
    const PolyHP c = charpoly(from_ints({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}}));
    const long want[] = {18, -24, 9, -1};
    for (int i = 0; i <= 3; ++i) {
        EXPECT_TRUE(c[i].overlaps(Ball(want[i], kP))) << i;
    }
}

TEST(Charpoly, ConstantTermIsDeterminantForEveryPermutation) {
    std::mt19937_64 rng(3);
    for (int n : {3, 5, 7}) {
        const BallMatrix X = random_matrix(n, rng);
        const Ball d = det(X);
        std::vector<int> g(n);
        std::iota(g.begin(), g.end(), 0);
        for (int t = 0; t < 6; ++t) {
            std::shuffle(g.begin(), g.end(), rng);
            const Permutation G(g);
            const PolyHP c = charpoly(X, G);
            EXPECT_TRUE(overlap(c[0], d));
            EXPECT_TRUE(c[n].overlaps(Ball(G.sign() * ((n % 2) ? -1 : 1), kP)));
            // Spot value: det(X - lambda P_G) at lambda = 0.5.
            BallMatrix Z = X;
            for (int k = 0; k < n; ++k) {
                Z(G[k], k) -= dec("0.5", "0", kP);
            }
            EXPECT_TRUE(overlap(c.eval(dec("0.5", "0", kP)), det(Z)));
        }
    }
}

TEST(Charpoly, QEqualsOneIsIdentity) {
    std::mt19937_64 rng(5);
    const BallMatrix X = random_matrix(4, rng);
    const PolyHP a = charpoly(X, perm_qr(1, 3, 4));
    const PolyHP b = charpoly(X);
    for (int i = 0; i <= 4; ++i) {
        EXPECT_TRUE(overlap(a[i], b[i]));
    }
}

TEST(DetPoly, MatchesDirectDeterminantAtRandomPoints) {
    std::mt19937_64 rng(17);
    const BallMatrix C = random_matrix(5, rng);
    const MatrixHP M = hp_from(C, {{0, 2}, {1, 1}, {2, 0}});
    const PolyHP p = det_poly(M, Ball(1, kP));
    EXPECT_EQ(p.degree(), 3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 7; ++t) {
        const Ball y = Ball::from_double(u(rng), u(rng), kP);
        EXPECT_TRUE(overlap(p.eval(y), det(M.substitute(y))));
    }
}

TEST(DetPoly, SingleCellRootIsCofactorSolve) {
    std::mt19937_64 rng(23);
    const BallMatrix C = random_matrix(4, rng);
    const MatrixHP M = hp_from(C, {{1, 2}});
    const PolyHP p = det_poly(M, Ball(1, kP));
    ASSERT_EQ(p.degree(), 1);
    const Ball root = -p[0] / p[1];
    EXPECT_TRUE(overlap(root, cofactor_solve(C, 1, 2)));
    EXPECT_TRUE(laplace(M.substitute(root)).contains_zero());
}

TEST(CofactorSolve, SmallCases) {
    EXPECT_TRUE(cofactor_solve(from_ints({{5}}), 0, 0).contains_zero());
    EXPECT_TRUE(cofactor_solve(from_ints({{9, 2}, {3, 4}}), 0, 0).overlaps(dec("1.5", "0", kP)));
}

TEST(CofactorSolve, BackSubstitution) {
    std::mt19937_64 rng(29);
    for (int n = 2; n <= 6; ++n) {
        BallMatrix M = random_matrix(n, rng);
        const Ball rhs = Ball::from_double(0.3, -1.1, kP);
        const Ball y = cofactor_solve(M, n - 1, 0, rhs);
        M(n - 1, 0) = y;
        EXPECT_TRUE(overlap(det(M), rhs)) << n;
    }
}

TEST(CofactorSolve, VanishingCofactor) {
    EXPECT_EQ(code_of([] { (void)cofactor_solve(from_ints({{1, 2, 3}, {4, 0, 0}, {5, 0, 0}}), 0, 0); }),
              ErrorCode::CofactorVanishes);
}

TEST(PolyRoots, Simple) {
    const PolyHP p{{Ball(-1, kP), Ball(0, kP), Ball(1, kP)}, false};
    const auto r = poly_roots(p);
    ASSERT_EQ(r.size(), 2u);
    const bool a = r[0].contains(Ball(1, kP)) && r[1].contains(Ball(-1, kP));
    const bool b = r[1].contains(Ball(1, kP)) && r[0].contains(Ball(-1, kP));
    EXPECT_TRUE(a || b);
}

TEST(PolyRoots, TripleRoot) {
    const Ball c = Ball::from_double(0.25, 1.5, kP);
    // (y - c)^3 = y^3 - 3c y^2 + 3c^2 y - c^3
    const PolyHP p{{-(c * c * c), (c * c).mul_si(3), -c.mul_si(3), Ball(1, kP)}, false};
    const auto r = poly_roots(p);
    ASSERT_EQ(r.size(), 3u);
    for (const Ball& z : r) {
        EXPECT_TRUE(z.contains(c));
    }
}

TEST(PolyRoots, UncertainLeadingCoefficient) {
    const PolyHP p{{Ball(1, kP), Ball(0, kP).with_added_rad(Mag::pow2(-4))}, false};
    EXPECT_EQ(code_of([&] { (void)poly_roots(p); }), ErrorCode::DegreeUncertain);
}
