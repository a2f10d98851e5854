#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace grushin {

// Worker count: hardware concurrency capped by GRUSHIN_THREADS when set.
int worker_count();

// Runs body(i) for i in [0, count). Iterations must not share mutable state;
// results written to per-index slots are identical to a serial run.
// The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace grushin
