#pragma once

#include <cstddef>
#include <functional>

namespace rmt {

/// Worker count from RMT_SHRINK_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome never depends on scheduling. The first exception thrown by any
/// body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rmt
