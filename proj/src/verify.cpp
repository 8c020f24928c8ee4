#include "etalab/verify.hpp"

#include <gmpxx.h>

#include <array>
#include <chrono>
#include <cmath>
#include <functional>

#include "etalab/parallel.hpp"

namespace etalab {

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass:
            return "pass";
        case CheckStatus::fail:
            return "fail";
        case CheckStatus::inconclusive:
            return "inconclusive";
    }
    return "?";
}

CheckStatus combine(CheckStatus a, CheckStatus b) {
    auto rank = [](CheckStatus s) { return s == CheckStatus::fail ? 2 : s == CheckStatus::inconclusive ? 1 : 0; };
    return rank(a) >= rank(b) ? a : b;
}

namespace {

const char* const kSnPoint = "0.4+17i";
const char* const kMinorPoint = "0.4+16i";
const char* const kGencharPoint = "0.7+19i";

// |S_N(0.4+17i) - 1| from a run at two precisions (30 and 40 digits).
constexpr std::array<std::pair<int, double>, 4> kSnLadder{
    {{5, 2.3508442e-4}, {10, 1.8201475e-11}, {20, 8.9081509e-27}, {30, 1.7126873e-43}}};

std::string sci(const Mag& m) { return m.to_string(3); }

double mid_double(const Ball& b) { return mpfr_get_d(b.abs().mid_re().get(), MPFR_RNDN); }

// x < tol certified, x >= tol certified, or undecided.
CheckStatus below(const Ball& x, double tol) {
    if (x.abs_upper() < Mag::from_double_down(tol)) {
        return CheckStatus::pass;
    }
    if (x.abs_lower() >= Mag::from_double_up(tol)) {
        return CheckStatus::fail;
    }
    return CheckStatus::inconclusive;
}

// Certified a < b for non-negative real balls.
CheckStatus less(const Ball& a, const Ball& b) {
    if (a.abs_upper() < b.abs_lower()) {
        return CheckStatus::pass;
    }
    if (a.abs_lower() >= b.abs_upper()) {
        return CheckStatus::fail;
    }
    return CheckStatus::inconclusive;
}

const ResultRow& find_row(const ExperimentResult& r, std::string_view label) {
    for (const auto& row : r.rows) {
        if (row.label == label) {
            return row;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "experiment " + r.name + " has no row '" + std::string(label) + "'");
}

// Delta of a row, or nullptr if it could not be formed.
const Ball* delta_of(const ExperimentResult& r, std::string_view label) {
    const ResultRow& row = find_row(r, label);
    return row.delta ? &*row.delta : nullptr;
}

ExperimentParams at_point(const char* a) {
    ExperimentParams p;
    p.a = ComplexLiteral::parse(a);
    return p;
}

struct Tally {
    CheckStatus status = CheckStatus::pass;
    std::vector<std::string> bad;

    void note(CheckStatus s, std::string what) {
        status = combine(status, s);
        if (s != CheckStatus::pass) {
            bad.push_back(std::string(to_string(s)) + ": " + std::move(what));
        }
    }
    std::string detail(const std::string& ok) const {
        if (bad.empty()) {
            return ok;
        }
        std::string out;
        const std::size_t shown = std::min<std::size_t>(bad.size(), 4);
        for (std::size_t i = 0; i < shown; ++i) {
            out += (i ? "; " : "") + bad[i];
        }
        if (bad.size() > shown) {
            out += "; +" + std::to_string(bad.size() - shown) + " more";
        }
        return out;
    }
};

// Steps that may come out undecided are repeated once at twice the digits.
Check retry_undecided(const std::function<Check(const Session&)>& body, const Session& s) {
    Check c = body(s);
    if (c.status == CheckStatus::inconclusive && !s.fixed_prec) {
        Session t = s;
        t.target.digits *= 2;
        c = body(t);
    }
    return c;
}

// Convergence at a sample point may fail for exceptional arguments, so a
// failure at the first point only flags the check if a second point holds.
Check with_second_point(const std::function<Check(const Session&, const char*)>& body, const Session& s,
                        const char* first, const char* second) {
    Check c = retry_undecided([&](const Session& t) { return body(t, first); }, s);
    if (c.status != CheckStatus::fail) {
        return c;
    }
    Check d = retry_undecided([&](const Session& t) { return body(t, second); }, s);
    c.results.insert(c.results.end(), d.results.begin(), d.results.end());
    if (d.status == CheckStatus::pass) {
        c.status = CheckStatus::inconclusive;
        c.detail = "flagged at a=" + std::string(first) + " (" + c.detail + "); holds at a=" + second;
    } else {
        c.detail = "a=" + std::string(first) + ": " + c.detail + "; a=" + second + ": " + d.detail;
    }
    return c;
}

Ball factorial(int n, Prec prec) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Ball::from_mpz(f, prec);
}

// Laplace expansion along the first row.
Ball cofactor_det(const BallMatrix& M) {
    const int n = M.size();
    if (n == 0) {
        return Ball(1, 64);
    }
    if (n == 1) {
        return M(0, 0);
    }
    Ball sum(M(0, 0).prec());
    for (int k = 0; k < n; ++k) {
        const Ball t = M(0, k) * cofactor_det(M.minor(0, k));
        sum = (k % 2 == 0) ? sum + t : sum - t;
    }
    return sum;
}

ResultRow identity_row(std::string label, const Ball& lhs, const Ball& rhs, Tally& t) {
    const bool ok = lhs.overlaps(rhs);
    t.note(ok ? CheckStatus::pass : CheckStatus::fail, label + " disjoint");
    return {std::move(label), lhs, rhs, std::nullopt, ok ? "intersect" : "disjoint"};
}

}  // namespace

// ------------------------------------------------------------ criteria

Check check_reference_constants(const Session& s) {
    return retry_undecided(
        [](const Session& t) {
            struct Ref {
                const char* set;
                const char* re;
                const char* im;
            };
            const Ref refs[] = {{kGridSet, "0.99999999999999430995", "0.00000000000000951329"},
                                {kCircleSet, "1.00000000000000637109", "0.00000000000003070321"}};
            Check c{"reference-constants", "Q of the grid and circle sets against the printed constants", {}, {}, {}};
            Tally tally;
            std::string ok;
            for (const Ref& ref : refs) {
                ExperimentParams p;
                p.set = ref.set;
                ExperimentResult r = run_experiment("q", p, t);
                const Ball& q = *find_row(r, "Q").value;
                const Ball printed = Ball::from_decimal(ref.re, ref.im, q.prec());
                const Ball d = (q - printed).abs();
                tally.note(below(d, 1e-19), std::string(ref.set) + " |Q-b| <= " + sci(d.abs_upper()));
                ok += (ok.empty() ? "" : ", ") + std::string("|Q-b| <= ") + sci(d.abs_upper());
                r.rows.push_back({"|Q-b|", d, std::nullopt, std::nullopt,
                                  "b = " + std::string(ref.re) + "+" + ref.im + "i"});
                c.results.push_back(std::move(r));
            }
            c.status = tally.status;
            c.detail = tally.detail(ok + " (tolerance 1e-19)");
            return c;
        },
        s);
}

Check check_r_bound(const Session& s) {
    return retry_undecided(
        [](const Session& t) {
            Check c{"r-bound", "all l, m, n: |R/eta - 1| < 1e-7 on both sets", {}, {}, {}};
            Tally tally;
            std::string ok;
            for (const char* set : {kGridSet, kCircleSet}) {
                ExperimentParams p;
                p.set = set;
                ExperimentResult r = run_experiment("r-sweep", p, t);
                const ResultRow& worst = find_row(r, "max |R/eta-1|");
                tally.note(below(*worst.delta, 1e-7), std::string(set) + " max " + sci(worst.delta->abs_upper()));
                ok += (ok.empty() ? "" : ", ") + std::string("max ") + sci(worst.delta->abs_upper());
                c.results.push_back(std::move(r));
            }
            c.status = tally.status;
            c.detail = tally.detail(ok + " over 1584 cases per set");
            return c;
        },
        s);
}

Check check_engine_identities(const Session& s) {
    Check c{"engine-identities", "exact identities of the determinant engine", {}, {}, {}};
    Tally tally;
    ExperimentResult res;
    res.name = "identities";
    const auto t0 = std::chrono::steady_clock::now();
    const ComplexLiteral a = ComplexLiteral::parse(kSnPoint);
    auto guarded = [&](const std::string& what, const std::function<void()>& f) {
        try {
            f();
        } catch (const Error& e) {
            tally.note(CheckStatus::inconclusive, what + " (" + e.what() + ")");
            res.rows.push_back({what, std::nullopt, std::nullopt, std::nullopt, e.what()});
        }
    };

    // Constant and leading term of the (generalized) characteristic polynomial.
    guarded("charpoly", [&] {
        const int N = 8;
        Workbench wb(*s.provider, s.target.start_prec());
        const auto dv = wb.derivs(wb.point(a), 2 * N - 1);
        BallMatrix X(N, wb.prec());
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                X(j, k) = dv->at(1 + j + k).with_prec(wb.prec());
            }
        }
        const Ball d = det(X);
        for (const Permutation& G : {Permutation::identity(N), perm_qr(3, 1, N), perm_qr(5, 2, N)}) {
            const PolyHP cp = charpoly(X, G);
            const std::string g = G.to_string();
            res.rows.push_back(identity_row("C_G(0) = det, G=" + g, cp[0], d, tally));
            const long lead = ((N % 2) ? -1 : 1) * G.sign();
            res.rows.push_back(identity_row("C_G leading, G=" + g, cp[N], Ball(lead, wb.prec()), tally));
        }
    });

    for (const char* set : {kGridSet, kCircleSet}) {
        const PointSet A = PointSet::parse(set, 64);
        guarded(std::string("Q_0 = Q ") + set, [&] {
            const auto qn = qn_ratios(A, s).value;
            const Ball q = q_ratio(A, IndexSeq(), s).value;
            if (!qn.at(0)) {
                throw Error(ErrorCode::DenominatorVanishes, "Q_0 has no certified denominator");
            }
            res.rows.push_back(identity_row(std::string("Q_0 = Q ") + set, *qn[0], q, tally));
        });
        for (const std::set<int>& drop : {std::set<int>{}, std::set<int>{2}}) {
            const std::string tag = std::string(set) + (drop.empty() ? "" : " drop 2");
            guarded("Cramer = solve " + tag, [&] {
                const IndexSeq D = IndexSeq::missing(drop);
                const LinearSolution sol = solve_linear_family(A, D, 0, s).value;
                const Ball q = q_ratio(A, D, s).value;
                tally.note(sol.consistent() ? CheckStatus::pass : CheckStatus::fail, "Cramer/solve " + tag);
                res.rows.push_back({"Cramer unknowns " + tag, sol.b_cramer, sol.b, std::nullopt,
                                    sol.consistent() ? "intersect" : "disjoint"});
                res.rows.push_back(identity_row("Q = b " + tag, q, sol.b, tally));
            });
        }
    }

    for (int N : {5, 10}) {
        const std::string n = " N=" + std::to_string(N);
        guarded("factorial scaling" + n, [&] {
            const Ball plain = s_n(a, N, SnVariant::plain, s).value;
            const Ball fact = s_n(a, N, SnVariant::fact, s).value;
            const Ball anti = s_n(a, N, SnVariant::antifact, s).value;
            const Ball f = factorial(N - 1, plain.prec());
            res.rows.push_back(identity_row("S_fact (N-1)! = S" + n, fact * f, plain, tally));
            res.rows.push_back(identity_row("S_antifact = S (N-1)!" + n, anti, plain * f, tally));
        });
    }
    for (int N : {10, 20}) {
        const std::string n = " N=" + std::to_string(N);
        guarded("minor with nothing removed" + n, [&] {
            const Ball plain = s_n(a, N, SnVariant::plain, s).value;
            const Ball minor = s_n(a, N, SnVariant::minor, s, IndexSeq::missing({}), IndexSeq::missing({})).value;
            res.rows.push_back(identity_row("S minor(-,-) = S" + n, minor, plain, tally));
        });
    }

    {
        const int N = 5;
        for (int m = 0; m <= 2 * N - 2; ++m) {
            const std::string label = "deg E_{1," + std::to_string(m) + ",5}";
            guarded(label, [&] {
                const PolyHP E = e_poly(1, m, N, a, s).value;
                const int want = std::min(m + 1, 2 * N - m - 1);
                const bool ok = E.degree() == want && !E.degree_uncertain;
                tally.note(ok ? CheckStatus::pass : CheckStatus::fail,
                           label + " = " + std::to_string(E.degree()) + ", expected " + std::to_string(want));
                res.rows.push_back({label, E[E.degree()], std::nullopt, std::nullopt,
                                    "degree " + std::to_string(E.degree()) + ", expected " + std::to_string(want)});
            });
        }
    }
    for (int l : {1, 2}) {
        const std::string label = "conj3(m=0,n=1) = root, l=" + std::to_string(l);
        guarded(label, [&] {
            const int N = 10;
            const Ball r = conj3_ratio(l, 0, N, 1, a, s).value;
            const PolyHP E = e_poly(l, 0, N, a, s).value;
            if (E.degree() != 1) {
                throw Error(ErrorCode::DegreeUncertain, "E_{l,0,N} is not linear");
            }
            res.rows.push_back(identity_row(label, r, -E[0] / E[1], tally));
        });
    }

    guarded("det = cofactor expansion", [&] {
        SplitMix64 rng(0x5eed);
        const Prec prec = 128;
        auto uniform = [&] { return static_cast<double>(rng.next53()) * 0x1p-53 * 4.0 - 2.0; };
        for (int n = 1; n <= 5; ++n) {
            for (int rep = 0; rep < 3; ++rep) {
                BallMatrix M(n, prec);
                for (int j = 0; j < n; ++j) {
                    for (int k = 0; k < n; ++k) {
                        M(j, k) = Ball::from_double(uniform(), uniform(), prec).with_added_rad(Mag::pow2(-90));
                    }
                }
                res.rows.push_back(identity_row("det = Laplace, n=" + std::to_string(n) + " #" + std::to_string(rep),
                                                det(M), cofactor_det(M), tally));
            }
        }
    });

    res.digits = s.target.digits;
    res.reached = true;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.results.push_back(std::move(res));
    c.status = tally.status;
    c.detail = tally.detail(std::to_string(c.results.front().rows.size()) + " identities hold");
    return c;
}

Check check_sn_trend(const Session& s) {
    return retry_undecided(
        [](const Session& t) {
            Check c{"sn-trend", "|S_N(0.4+17i) - 1| decreasing along N = 5, 10, 20, 30", {}, {}, {}};
            Tally tally;
            Session hi = t;
            hi.target.digits += 10;
            std::vector<Ball> deltas;
            std::string ok;
            for (const auto& [N, golden] : kSnLadder) {
                ExperimentParams p = at_point(kSnPoint);
                p.N = N;
                p.variant = "plain";
                ExperimentResult r1 = run_experiment("sn", p, t);
                const ExperimentResult r2 = run_experiment("sn", p, hi);
                const Ball* d1 = delta_of(r1, "S");
                const Ball* d2 = delta_of(r2, "S");
                const std::string n = "N=" + std::to_string(N);
                if (!d1 || !d2 || d1->contains_zero()) {
                    tally.note(CheckStatus::inconclusive, n + " delta not certified");
                    deltas.emplace_back(64);
                } else {
                    const double v1 = mid_double(*d1);
                    const double v2 = mid_double(*d2);
                    const bool agree = std::abs(v1 / v2 - 1) < 1e-5;
                    const bool frozen = std::abs(v1 / golden - 1) < 1e-5;
                    tally.note(agree ? CheckStatus::pass : CheckStatus::fail, n + " precisions disagree");
                    tally.note(frozen ? CheckStatus::pass : CheckStatus::fail,
                               n + " " + sci(d1->abs_upper()) + " differs from ladder value");
                    deltas.push_back(*d1);
                    ok += (ok.empty() ? "" : " > ") + sci(d1->abs_upper());
                }
                c.results.push_back(std::move(r1));
            }
            for (std::size_t i = 1; i < deltas.size(); ++i) {
                tally.note(less(deltas[i], deltas[i - 1]),
                           "N=" + std::to_string(kSnLadder[i].first) + " not below N=" +
                               std::to_string(kSnLadder[i - 1].first));
            }
            c.status = tally.status;
            c.detail = tally.detail(ok);
            return c;
        },
        s);
}

Check check_conj3_trend(const Session& s, int high) {
    return with_second_point(
        [high](const Session& t, const char* a) {
            Check c{"conj3-trend", "conj3 ratios at N=" + std::to_string(high) + " within 1e-2 and below N=30",
                    {}, {}, {}};
            Tally tally;
            Mag worst;
            for (int m = 0; m <= 2; ++m) {
                ExperimentParams p = at_point(a);
                p.l = 1;
                p.m = m;
                p.N = 30;
                const ExperimentResult low = run_experiment("conj3", p, t);
                p.N = high;
                const ExperimentResult top = run_experiment("conj3", p, t);
                for (int n = 1; n <= m + 1; ++n) {
                    const std::string label = "n=" + std::to_string(n);
                    const std::string tag = "m=" + std::to_string(m) + " " + label;
                    const Ball* d0 = delta_of(low, label);
                    const Ball* d1 = delta_of(top, label);
                    if (!d0 || !d1) {
                        tally.note(CheckStatus::inconclusive, tag + " delta missing");
                        continue;
                    }
                    worst = max(worst, d1->abs_upper());
                    tally.note(below(*d1, 1e-2), tag + " " + sci(d1->abs_upper()) + " >= 1e-2");
                    tally.note(less(*d1, *d0), tag + " not below its N=30 value");
                }
                c.results.push_back(low);
                c.results.push_back(top);
            }
            c.status = tally.status;
            c.detail = tally.detail("worst delta at N=" + std::to_string(high) + " " + sci(worst));
            return c;
        },
        s, kSnPoint, kMinorPoint);
}

Check check_minor_trend(const Session& s) {
    return with_second_point(
        [](const Session& t, const char* a) {
            Check c{"minor-trend", "minor variants decreasing along N = 10, 20, 30", {}, {}, {}};
            Tally tally;
            const std::set<int> choices[] = {{}, {1}, {1, 2}};
            int combos = 0;
            for (const auto& dd : choices) {
                for (const auto& df : choices) {
                    std::vector<const Ball*> ds;
                    std::vector<ExperimentResult> runs;
                    for (int N : {10, 20, 30}) {
                        ExperimentParams p = at_point(a);
                        p.N = N;
                        p.variant = "minor";
                        p.drop_d = dd;
                        p.drop_f = df;
                        runs.push_back(run_experiment("sn", p, t));
                    }
                    for (const auto& r : runs) {
                        ds.push_back(delta_of(r, "S"));
                    }
                    const std::string tag = "drop-d " + std::to_string(dd.size()) + " drop-f " + std::to_string(df.size());
                    for (std::size_t i = 1; i < ds.size(); ++i) {
                        if (!ds[i] || !ds[i - 1]) {
                            tally.note(CheckStatus::inconclusive, tag + " delta missing");
                            continue;
                        }
                        tally.note(less(*ds[i], *ds[i - 1]), tag + " step " + std::to_string(i) + " not decreasing");
                    }
                    ++combos;
                    c.results.insert(c.results.end(), runs.begin(), runs.end());
                }
            }
            c.status = tally.status;
            c.detail = tally.detail(std::to_string(combos) + " variant pairs decrease");
            return c;
        },
        s, kMinorPoint, kSnPoint);
}

Check check_genchar_trend(const Session& s) {
    return with_second_point(
        [](const Session& t, const char* a) {
            Check c{"genchar-trend", "l=2 characteristic polynomial ratios decreasing along N = 10, 20, 30", {}, {},
                    {}};
            Tally tally;
            std::vector<ExperimentResult> runs;
            for (int N : {10, 20, 30}) {
                ExperimentParams p = at_point(a);
                p.l = 2;
                p.N = N;
                p.perm = std::pair<int, int>{1, 1};
                p.max_degree = 2;
                runs.push_back(run_experiment("genchar", p, t));
            }
            for (int n = 0; n <= 2; ++n) {
                const std::string label = "n=" + std::to_string(n);
                for (std::size_t i = 1; i < runs.size(); ++i) {
                    const Ball* d0 = delta_of(runs[i - 1], label);
                    const Ball* d1 = delta_of(runs[i], label);
                    if (!d0 || !d1) {
                        tally.note(CheckStatus::inconclusive, label + " delta missing");
                        continue;
                    }
                    tally.note(less(*d1, *d0), label + " step " + std::to_string(i) + " not decreasing");
                }
            }
            std::string ok;
            for (int n = 0; n <= 2; ++n) {
                if (const Ball* d = delta_of(runs.back(), "n=" + std::to_string(n))) {
                    ok += (ok.empty() ? "N=30: " : ", ") + sci(d->abs_upper());
                }
            }
            c.results = std::move(runs);
            c.status = tally.status;
            c.detail = tally.detail(ok);
            return c;
        },
        s, kGencharPoint, kSnPoint);
}

Check check_limit(const Session& s) {
    return retry_undecided(
        [](const Session& t) {
            Check c{"limit", "diff(1e-3) / diff(5e-4) in [1.5, 2.5] at N=12", {}, {}, {}};
            std::vector<Ball> diffs;
            for (const char* eps : {"1e-3", "5e-4"}) {
                ExperimentParams p = at_point(kSnPoint);
                p.N = 12;
                p.eps = ComplexLiteral::parse(eps);
                ExperimentResult r = run_experiment("limit", p, t);
                diffs.push_back(*find_row(r, "|Q-S|").value);
                c.results.push_back(std::move(r));
            }
            if (diffs[1].contains_zero()) {
                c.status = CheckStatus::inconclusive;
                c.detail = "diff(5e-4) not certified nonzero";
                return c;
            }
            const Ball ratio = diffs[0] / diffs[1];
            c.results.back().rows.push_back({"ratio", ratio, std::nullopt, std::nullopt, "diff(1e-3) / diff(5e-4)"});
            const Mag lo = ratio.abs_lower();
            const Mag hi = ratio.abs_upper();
            if (lo >= Mag::from_double_up(1.5) && hi <= Mag::from_double_down(2.5)) {
                c.status = CheckStatus::pass;
            } else if (hi < Mag::from_double_down(1.5) || lo > Mag::from_double_up(2.5)) {
                c.status = CheckStatus::fail;
            } else {
                c.status = CheckStatus::inconclusive;
            }
            c.detail = "ratio " + ratio.mid_string(6) + " +/- " + ratio.rad().to_string(2);
            return c;
        },
        s);
}

Check check_evaluators(const Session& s, std::uint64_t seed, int count, int K) {
    Check c{"evaluators", "Euler-Maclaurin and direct derivatives intersect", {}, {}, {}};
    const auto t0 = std::chrono::steady_clock::now();
    const AccuracyTarget target(s.target.digits, s.target.max_prec_bits);
    const Prec point_prec = 2 * target.start_prec() + 64;
    const std::string desc = "random:" + std::to_string(seed) + ";0.2,3,-30,30;" + std::to_string(count);
    const PointSet A = PointSet::parse(desc, point_prec);

    std::vector<ResultRow> rows(A.size());
    std::vector<CheckStatus> status(A.size(), CheckStatus::pass);
    parallel_for(A.size(), [&](std::size_t i) {
        const Ball& a = A[i];
        ResultRow& row = rows[i];
        row.label = "p" + std::to_string(i) + " " + a.mid_string(8);
        try {
            const DerivVector em = eta_derivs(a, K, target);
            const DerivVector direct = eta_derivs_direct(a, K, target);
            int bad = -1;
            for (int k = 0; k <= K && bad < 0; ++k) {
                if (!em.at(k).overlaps(direct.at(k))) {
                    bad = k;
                }
            }
            row.value = em.at(K);
            row.target = direct.at(K);
            row.note = bad < 0 ? std::to_string(K + 1) + " orders intersect" : "order " + std::to_string(bad) + " disjoint";
            if (em.method() != Method::euler_maclaurin) {
                row.note += " (" + std::string(to_string(em.method())) + " near the pole)";
            }
            status[i] = bad < 0 ? CheckStatus::pass : CheckStatus::fail;
        } catch (const Error& e) {
            row.note = e.what();
            status[i] = CheckStatus::inconclusive;
        }
    });

    Tally tally;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        tally.note(status[i], rows[i].label + ": " + rows[i].note);
    }
    ExperimentResult res;
    res.name = "evaluators";
    res.params = {{"set", A.descriptor()}, {"K", std::to_string(K)}};
    res.rows = std::move(rows);
    res.digits = target.digits;
    res.prec = point_prec;
    res.reached = tally.status == CheckStatus::pass;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.results.push_back(std::move(res));
    c.status = tally.status;
    c.detail = tally.detail(std::to_string(count) + " points, orders 0.." + std::to_string(K) + " intersect");
    return c;
}

// -------------------------------------------------------------- suites

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"paper", "engine", "trends"};
    return names;
}

std::vector<Check> run_suite(std::string_view suite, const Session& s) {
    if (s.target.digits < 10) {
        throw Error(ErrorCode::UsageError, "--digits must be at least 10 for verification suites");
    }
    if (suite == "paper") {
        return {check_reference_constants(s), check_r_bound(s)};
    }
    if (suite == "engine") {
        return {check_engine_identities(s), check_evaluators(s)};
    }
    if (suite == "trends") {
        return {check_sn_trend(s), check_conj3_trend(s), check_minor_trend(s), check_genchar_trend(s), check_limit(s)};
    }
    throw Error(ErrorCode::UsageError, "unknown suite '" + std::string(suite) + "' (known: paper, engine, trends)");
}

}  // namespace etalab
