#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "etalab/ball.hpp"

namespace etalab {

/// Exact B_2, B_4, ..., B_{2 count} (element j-1 holds B_{2j}).
///
/// Computed from the tangent numbers with integer arithmetic only and
/// memoized process-wide; the returned table is immutable.
std::shared_ptr<const std::vector<mpq_class>> bernoulli_even(std::size_t count);

/// B_n as an enclosure; odd n > 1 give exact zero.
Ball bernoulli(unsigned n, Prec prec);

}  // namespace etalab
