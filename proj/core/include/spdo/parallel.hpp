#pragma once

#include <cstddef>
#include <functional>

namespace spdo {

// Worker count: min(hardware_concurrency, SPDO_THREADS).  The environment
// variable caps parallelism; unset or invalid values fall back to the
// hardware count.  Always >= 1.
int worker_count();

// Split [0, count) into contiguous chunks and run body(begin, end) on each,
// using at most worker_count() threads.  Chunk boundaries depend only on
// `count` and the worker count, and every algorithm built on this helper
// writes to disjoint slots or reduces in a fixed order afterwards, so
// results do not depend on thread scheduling.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace spdo
