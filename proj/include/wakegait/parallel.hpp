#pragma once

#include <cstddef>
#include <functional>

namespace wakegait {

/// Worker count: hardware concurrency, capped by WAKEGAIT_THREADS when set.
std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
/// so results written by index are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wakegait
