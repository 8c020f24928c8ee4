#pragma once

#include <cstddef>
#include <functional>

namespace etalab {

/// Worker count used by parallel_for (default 1).
void set_jobs(unsigned jobs);
unsigned jobs();

/// Calls body(i) for i in [0, n), spread over the configured workers.
/// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace etalab
