#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "etalab/ball.hpp"
#include "etalab/etaeval.hpp"

namespace etalab {

// ---------------------------------------------------------------- basics

/// Dense square matrix of balls, row-major.
class BallMatrix {
public:
    BallMatrix() = default;
    BallMatrix(int n, Prec prec) : n_(n), a_(static_cast<std::size_t>(n) * n, Ball(prec)) {}

    int size() const { return n_; }
    Ball& operator()(int j, int k) { return a_[static_cast<std::size_t>(j) * n_ + k]; }
    const Ball& operator()(int j, int k) const { return a_[static_cast<std::size_t>(j) * n_ + k]; }

    /// Matrix with row j and column k removed.
    BallMatrix minor(int j, int k) const;

private:
    int n_ = 0;
    std::vector<Ball> a_;
};

/// Bijection k -> g_k on {0..N-1}.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int N);

    int size() const { return static_cast<int>(g_.size()); }
    int operator[](int k) const { return g_[k]; }
    const std::vector<int>& images() const { return g_; }
    /// (-1)^inversions.
    int sign() const { return sign_; }
    bool is_identity() const;
    std::string to_string() const;

private:
    std::vector<int> g_;
    int sign_;
};

/// Orders k = 0..N-1 by (k r mod q, k).  NotCoprime unless gcd(q, r) = 1.
Permutation perm_qr(int q, int r, int N);

/// Strictly increasing sequence of non-negative integers, either listed
/// or given by the finite set of integers it skips.
class IndexSeq {
public:
    /// 0, 1, 2, ...
    IndexSeq() = default;
    static IndexSeq listed(std::vector<int> values);
    static IndexSeq missing(std::set<int> skipped);

    int operator[](int i) const;
    /// The sequence without its first element.
    IndexSeq tail() const;
    bool is_full() const { return !listed_ && missing_.empty() && drop_ == 0; }
    std::string to_string() const;

private:
    bool listed_ = false;
    std::vector<int> values_;
    std::set<int> missing_;
    int drop_ = 0;
};

/// Polynomial with ball coefficients, ascending degree.
struct PolyHP {
    std::vector<Ball> coeffs;
    bool degree_uncertain = false;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    const Ball& operator[](int n) const { return coeffs[n]; }
    Ball eval(const Ball& y) const;
    std::string to_string(int digits = 10) const;
};

// ------------------------------------------------------ replacement rules

enum class Symbol { none, lambda, y };

/// Which cells a rule addresses.
struct Selector {
    enum class Kind { cell, row, col, all, antidiag, permdiag };
    Kind kind = Kind::all;
    int m = 0;
    int n = 0;
    int shift = 0;        // antidiag: j + k + shift == m
    std::vector<int> g;   // permdiag: j == g_k

    static Selector cell(int m, int n);
    static Selector row(int m);
    static Selector col(int n);
    static Selector all();
    static Selector antidiag(int m, int shift = 0);
    static Selector permdiag(const Permutation& G);

    bool matches(int j, int k) const;
    std::string to_string() const;
};

enum class Scale { none, div_col_factorial, mul_col_factorial, div_order_factorial };

/// What a matching cell becomes.
struct Payload {
    enum class Kind { constant, eta, y };
    Kind kind = Kind::constant;
    Ball value{64};

    // eta: order = (use_shift ? l : 0) + offset + row_coef * F[j] + col_coef * D[k],
    // read from the row's source (or the single shared one).
    bool use_shift = false;
    int offset = 0;
    int row_coef = 0;
    int col_coef = 1;
    Scale scale = Scale::none;

    static Payload constant(const Ball& v);
    static Payload zero();
    static Payload one();
    static Payload minus_one();
    static Payload y();
    /// eta^(use_shift*l + offset + row_coef*F[j] + col_coef*D[k]).
    static Payload eta(int row_coef, int col_coef, int offset = 0, bool use_shift = false);
    Payload scaled(Scale s) const;

    std::string to_string() const;
};

struct CellRule {
    Selector sel;
    Payload payload;
    std::string to_string() const;
};

/// Ordered rules; the first match decides each cell.  An optional
/// conditional rule subtracts lambda on top of the chosen value.
struct RuleSet {
    std::vector<CellRule> rules;
    std::optional<Selector> lambda_on;

    RuleSet& add(Selector s, Payload p);
    RuleSet& shift_lambda(Selector s);
    std::string to_string() const;
};

/// Derivative sources and index maps the rules refer to.
struct BuildEnv {
    /// One vector per row (point set) or a single shared one (fixed point).
    std::vector<const DerivVector*> sources;
    int l = 0;
    IndexSeq rows;   // F
    IndexSeq cols;   // D
    Prec prec = 64;
};

/// Entries c + u * symbol.
class MatrixHP {
public:
    MatrixHP(int N, Symbol s, Prec prec);

    int size() const { return n_; }
    Symbol symbol() const { return symbol_; }
    Ball& c(int j, int k) { return c_(j, k); }
    const Ball& c(int j, int k) const { return c_(j, k); }
    Ball& u(int j, int k) { return u_(j, k); }
    const Ball& u(int j, int k) const { return u_(j, k); }
    bool has_symbol(int j, int k) const;

    /// Constant parts; InvalidArgument if the matrix carries a symbol.
    const BallMatrix& numeric() const;
    /// c + u * v.
    BallMatrix substitute(const Ball& v) const;

private:
    int n_;
    Symbol symbol_;
    BallMatrix c_;
    BallMatrix u_;
};

/// UncoveredCell if some cell matches no rule; MissingDerivative for
/// orders beyond a source vector.
MatrixHP build_matrix(int N, const RuleSet& rules, const BuildEnv& env);

// ------------------------------------------------------------ operations

/// LU with partial pivoting on midpoint magnitude; the 0x0 determinant is 1.
Ball det(const BallMatrix& M);
Ball det(const MatrixHP& M);

/// Coefficients of det(X - lambda P_G), P_G having ones at (g_k, k).
/// Coefficients above `tight_upto` are still valid enclosures but no
/// extra work is spent tightening them.
PolyHP charpoly(const BallMatrix& X, const Permutation& G, int tight_upto = -1);
PolyHP charpoly(const BallMatrix& X);

/// det(M) as a polynomial in y; nodes on the circle |y| = rho.
/// DegreeUncertain when the top coefficient is not certified nonzero,
/// unless allow_uncertain is set (the result is then flagged).
PolyHP det_poly(const MatrixHP& M, const Ball& rho, bool allow_uncertain = false);

/// y with det(M with cell (m,n) -> y) = rhs.
Ball cofactor_solve(const BallMatrix& M, int m, int n, const Ball& rhs);
Ball cofactor_solve(const BallMatrix& M, int m, int n);

/// Certified enclosures of all roots (with multiplicity).
std::vector<Ball> poly_roots(const PolyHP& p);

}  // namespace etalab
