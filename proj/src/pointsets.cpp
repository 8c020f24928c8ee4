#include "etalab/pointsets.hpp"

#include <charconv>
#include <regex>
#include <sstream>

namespace etalab {
namespace {

const std::string kNumber = R"((?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";

bool is_zero_literal(const std::string& s) {
    for (char c : s) {
        if (c == 'e' || c == 'E') {
            break;
        }
        if (c >= '1' && c <= '9') {
            return false;
        }
    }
    return true;
}

int parse_count(std::string_view s, const char* what, int min) {
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || v < min) {
        throw Error(ErrorCode::UsageError,
                    std::string(what) + " must be an integer >= " + std::to_string(min) + ", got '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

void require_distinct(const std::vector<Ball>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (pts[i].overlaps(pts[j])) {
                throw Error(ErrorCode::DegenerateSet,
                            "points " + std::to_string(j) + " and " + std::to_string(i) + " are not separated");
            }
        }
    }
}

// e^(2 pi i k/N), exact on quarter turns.
Ball root_of_unity(int k, int N, Prec prec) {
    if ((4L * k) % N == 0) {
        switch ((4L * k / N) % 4) {
        case 0: return Ball(1, prec);
        case 1: return Ball::from_int(0, 1, prec);
        case 2: return Ball(-1, prec);
        default: return Ball::from_int(0, -1, prec);
        }
    }
    const Ball theta = (Ball::pi(prec).mul_si(2 * k)).div_si(N);
    return exp(Ball::from_int(0, 1, prec) * theta);
}

std::vector<Ball> generate(const GridSpec& g, Prec p) {
    if (g.N1 < 0 || g.N2 < 0) {
        throw Error(ErrorCode::InvalidArgument, "grid extents must be non-negative");
    }
    const Ball a = g.a.to_ball(p);
    const Ball d1 = g.d1.to_ball(p);
    const Ball d2 = g.d2.to_ball(p);
    if (d1.is_exact() && d2.is_exact() && d1.contains_zero() && d2.contains_zero() && (g.N1 > 0 || g.N2 > 0)) {
        throw Error(ErrorCode::DegenerateSet, "both grid steps are zero");
    }
    std::vector<Ball> pts;
    for (int k = 0; k <= g.N1; ++k) {
        for (int l = 0; l <= g.N2; ++l) {
            pts.push_back(a + d1.mul_si(k) + d2.mul_si(l));
        }
    }
    return pts;
}

std::vector<Ball> generate(const CircleSpec& c, Prec p) {
    if (c.N < 1) {
        throw Error(ErrorCode::InvalidArgument, "circle needs N >= 1");
    }
    const Ball center = c.c.to_ball(p);
    const Ball r = c.r.to_ball(p);
    if (r.contains_zero()) {
        throw Error(ErrorCode::DegenerateSet, "circle radius ball contains 0");
    }
    std::vector<Ball> pts;
    for (int k = 0; k < c.N; ++k) {
        pts.push_back(center + root_of_unity(k, c.N, p) * r);
    }
    return pts;
}

std::vector<Ball> generate(const ProgressionSpec& s, Prec p) {
    if (s.N < 1) {
        throw Error(ErrorCode::InvalidArgument, "progression needs N >= 1");
    }
    const Ball a = s.a.to_ball(p);
    const Ball e = s.eps.to_ball(p);
    if (s.N > 1 && e.contains_zero()) {
        throw Error(ErrorCode::DegenerateSet, "progression step ball contains 0");
    }
    std::vector<Ball> pts;
    for (int j = 0; j < s.N; ++j) {
        pts.push_back(a + e.mul_si(j));
    }
    return pts;
}

std::vector<Ball> generate(const RandomSpec& s, Prec p) {
    if (s.N < 1) {
        throw Error(ErrorCode::InvalidArgument, "random set needs N >= 1");
    }
    Ball lo[2];
    Ball width[2];
    for (int i = 0; i < 2; ++i) {
        lo[i] = Ball::from_decimal(s.box[2 * i], "0", p);
        width[i] = Ball::from_decimal(s.box[2 * i + 1], "0", p) - lo[i];
        if (width[i].contains_zero() || mpfr_sgn(width[i].mid_re().get()) < 0) {
            throw Error(ErrorCode::InvalidArgument, "random box must satisfy lo < hi on both axes");
        }
    }
    SplitMix64 rng(s.seed);
    const Ball scale = Ball(1, p).mul_2exp(-53);
    std::vector<Ball> pts;
    int retries = 0;
    while (static_cast<int>(pts.size()) < s.N) {
        Ball u[2];
        for (int i = 0; i < 2; ++i) {
            const std::uint64_t x = rng.next53();
            u[i] = lo[i] + Ball::from_mpz(mpz_class(static_cast<unsigned long>(x)), p) * scale * width[i];
        }
        Ball z = u[0] + Ball::from_int(0, 1, p) * u[1];
        bool clash = false;
        for (const Ball& q : pts) {
            clash = clash || q.overlaps(z);
        }
        if (clash) {
            if (++retries > 100) {
                throw Error(ErrorCode::DegenerateSet, "random set: too many colliding draws");
            }
            continue;
        }
        pts.push_back(std::move(z));
    }
    return pts;
}

std::vector<Ball> generate(const ExplicitSpec& s, Prec p) {
    if (s.points.empty()) {
        throw Error(ErrorCode::InvalidArgument, "explicit set is empty");
    }
    std::vector<Ball> pts;
    for (const auto& c : s.points) {
        pts.push_back(c.to_ball(p));
    }
    return pts;
}

}  // namespace

ComplexLiteral ComplexLiteral::parse(std::string_view text) {
    static const std::regex re("^([+-]?" + kNumber + ")(?:([+-]" + kNumber + ")i)?$");
    std::cmatch m;
    if (!std::regex_match(text.begin(), text.end(), m, re)) {
        throw Error(ErrorCode::UsageError, "malformed complex literal '" + std::string(text) + "'");
    }
    ComplexLiteral c;
    c.re = m[1].str();
    c.im = m[2].matched ? m[2].str() : "0";
    if (c.re[0] == '+') {
        c.re.erase(0, 1);
    }
    if (c.im[0] == '+') {
        c.im.erase(0, 1);
    }
    return c;
}

Ball ComplexLiteral::to_ball(Prec prec) const { return Ball::from_decimal(re, im, prec); }

std::string ComplexLiteral::str() const {
    if (is_zero_literal(im)) {
        return re;
    }
    return re + (im[0] == '-' ? "" : "+") + im + "i";
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PointSet::PointSet(Generator gen, Prec prec) : gen_(std::move(gen)), prec_(prec) {
    points_ = std::visit([&](const auto& g) { return generate(g, prec); }, gen_);
    require_distinct(points_);
}

std::string PointSet::descriptor() const {
    std::ostringstream o;
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, GridSpec>) {
                o << "grid:" << g.a.str() << ';' << g.d1.str() << ';' << g.d2.str() << ';' << g.N1 << ';' << g.N2;
            } else if constexpr (std::is_same_v<T, CircleSpec>) {
                o << "circle:" << g.c.str() << ';' << g.r.str() << ';' << g.N;
            } else if constexpr (std::is_same_v<T, ProgressionSpec>) {
                o << "prog:" << g.a.str() << ';' << g.eps.str() << ';' << g.N;
            } else if constexpr (std::is_same_v<T, RandomSpec>) {
                o << "random:" << g.seed << ';' << g.box[0] << ',' << g.box[1] << ',' << g.box[2] << ','
                  << g.box[3] << ';' << g.N;
            } else {
                o << "explicit:";
                for (std::size_t i = 0; i < g.points.size(); ++i) {
                    o << (i ? ";" : "") << g.points[i].str();
                }
            }
        },
        gen_);
    return o.str();
}

PointSet PointSet::parse(std::string_view d, Prec prec) {
    const auto colon = d.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::UsageError, "point set descriptor needs a 'kind:' prefix: '" + std::string(d) + "'");
    }
    const std::string kind(d.substr(0, colon));
    const auto f = split(d.substr(colon + 1), ';');
    auto need = [&](std::size_t n) {
        if (f.size() != n) {
            throw Error(ErrorCode::UsageError, kind + " descriptor needs " + std::to_string(n) + " fields, got " +
                                                   std::to_string(f.size()));
        }
    };
    if (kind == "grid") {
        need(5);
        return grid(ComplexLiteral::parse(f[0]), ComplexLiteral::parse(f[1]), ComplexLiteral::parse(f[2]),
                    parse_count(f[3], "N1", 0), parse_count(f[4], "N2", 0), prec);
    }
    if (kind == "circle") {
        need(3);
        return circle(ComplexLiteral::parse(f[0]), ComplexLiteral::parse(f[1]), parse_count(f[2], "N", 1), prec);
    }
    if (kind == "prog") {
        need(3);
        return progression(ComplexLiteral::parse(f[0]), ComplexLiteral::parse(f[1]), parse_count(f[2], "N", 1), prec);
    }
    if (kind == "random") {
        need(3);
        std::uint64_t seed = 0;
        auto [p, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), seed);
        if (ec != std::errc() || p != f[0].data() + f[0].size()) {
            throw Error(ErrorCode::UsageError, "bad random seed '" + f[0] + "'");
        }
        const auto b = split(f[1], ',');
        if (b.size() != 4) {
            throw Error(ErrorCode::UsageError, "random box needs re_lo,re_hi,im_lo,im_hi");
        }
        std::array<std::string, 4> box;
        for (int i = 0; i < 4; ++i) {
            const auto c = ComplexLiteral::parse(b[i]);
            if (!is_zero_literal(c.im)) {
                throw Error(ErrorCode::UsageError, "random box bounds must be real");
            }
            box[i] = c.re;
        }
        return random_set(seed, box, parse_count(f[2], "N", 1), prec);
    }
    if (kind == "explicit") {
        std::vector<ComplexLiteral> pts;
        for (const auto& s : f) {
            pts.push_back(ComplexLiteral::parse(s));
        }
        return explicit_set(std::move(pts), prec);
    }
    throw Error(ErrorCode::UsageError, "unknown point set kind '" + kind + "'");
}

PointSet grid(const ComplexLiteral& a, const ComplexLiteral& d1, const ComplexLiteral& d2, int N1, int N2, Prec prec) {
    return {GridSpec{a, d1, d2, N1, N2}, prec};
}

PointSet circle(const ComplexLiteral& c, const ComplexLiteral& r, int N, Prec prec) { return {CircleSpec{c, r, N}, prec}; }

PointSet progression(const ComplexLiteral& a, const ComplexLiteral& eps, int N, Prec prec) {
    return {ProgressionSpec{a, eps, N}, prec};
}

PointSet random_set(std::uint64_t seed, const std::array<std::string, 4>& box, int N, Prec prec) {
    return {RandomSpec{seed, box, N}, prec};
}

PointSet explicit_set(std::vector<ComplexLiteral> points, Prec prec) { return {ExplicitSpec{std::move(points)}, prec}; }

}  // namespace etalab
