#pragma once

#include <gtest/gtest.h>

#include <string>

#include "etalab/ball.hpp"

namespace etalab::testing {

inline Ball dec(const char* re, const char* im = "0", Prec prec = 256) { return Ball::from_decimal(re, im, prec); }

// |b - g| <= rad(b) + tol |g|: golden values carry ~35 digits.
inline ::testing::AssertionResult near(const Ball& b, const Ball& g, double tol = 1e-32) {
    const Ball d = (b.with_prec(g.prec()) - g).abs();
    const Mag slack = add_up(b.rad(), mul_up(g.abs_upper(), Mag::from_double_up(tol)));
    if (d.abs_lower() <= slack) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << b.to_string(30) << " is not near " << g.to_string(30);
}

inline ::testing::AssertionResult overlap(const Ball& a, const Ball& b) {
    if (a.overlaps(b)) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a.to_string(25) << " and " << b.to_string(25) << " are disjoint";
}

}  // namespace etalab::testing
