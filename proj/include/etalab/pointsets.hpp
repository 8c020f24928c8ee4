#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "etalab/ball.hpp"

namespace etalab {

/// Complex decimal literal "RE", "RE+IMi" or "RE-IMi" (no spaces; an
/// exponent suffix such as 1e-3 is allowed on either part).
struct ComplexLiteral {
    std::string re = "0";
    std::string im = "0";

    static ComplexLiteral parse(std::string_view text);
    Ball to_ball(Prec prec) const;
    std::string str() const;

    friend bool operator==(const ComplexLiteral&, const ComplexLiteral&) = default;
};

struct GridSpec {
    ComplexLiteral a, d1, d2;
    int N1 = 0, N2 = 0;
};
struct CircleSpec {
    ComplexLiteral c, r;
    int N = 1;
};
struct ProgressionSpec {
    ComplexLiteral a, eps;
    int N = 1;
};
struct RandomSpec {
    std::uint64_t seed = 0;
    std::array<std::string, 4> box{"0", "1", "0", "1"};  // re_lo, re_hi, im_lo, im_hi
    int N = 1;
};
struct ExplicitSpec {
    std::vector<ComplexLiteral> points;
};

using Generator = std::variant<GridSpec, CircleSpec, ProgressionSpec, RandomSpec, ExplicitSpec>;

/// Finite ordered set of pairwise distinct sample points together with
/// the generator that produced it, so the set can be rebuilt at any precision.
class PointSet {
public:
    PointSet(Generator gen, Prec prec);

    /// Parses "grid:a;d1;d2;N1;N2", "circle:c;r;N", "prog:a;eps;N",
    /// "random:seed;re_lo,re_hi,im_lo,im_hi;N" or "explicit:p0;p1;...".
    static PointSet parse(std::string_view descriptor, Prec prec);

    const Generator& generator() const { return gen_; }
    std::string descriptor() const;

    Prec prec() const { return prec_; }
    PointSet at_prec(Prec prec) const { return {gen_, prec}; }

    std::size_t size() const { return points_.size(); }
    const Ball& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Ball>& points() const { return points_; }

private:
    Generator gen_;
    Prec prec_;
    std::vector<Ball> points_;
};

/// a + k d1 + l d2, k = 0..N1 outer, l = 0..N2 inner.
PointSet grid(const ComplexLiteral& a, const ComplexLiteral& d1, const ComplexLiteral& d2, int N1, int N2, Prec prec);
/// c + e^(2 pi i k/N) r, k = 0..N-1.
PointSet circle(const ComplexLiteral& c, const ComplexLiteral& r, int N, Prec prec);
/// a + j eps, j = 0..N-1.
PointSet progression(const ComplexLiteral& a, const ComplexLiteral& eps, int N, Prec prec);
/// N uniform points in the box from a splitmix64 stream.
PointSet random_set(std::uint64_t seed, const std::array<std::string, 4>& box, int N, Prec prec);
PointSet explicit_set(std::vector<ComplexLiteral> points, Prec prec);

/// The splitmix64 generator used by random_set.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Top 53 bits as an integer in [0, 2^53).
    std::uint64_t next53() { return next() >> 11; }

private:
    std::uint64_t state_;
};

}  // namespace etalab
