#pragma once

#include <cstddef>
#include <functional>

namespace qlc {

// Worker count from QLC_THREADS, else hardware concurrency (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n) over contiguous chunks on worker_count() threads.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qlc
