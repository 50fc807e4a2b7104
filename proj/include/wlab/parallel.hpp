#pragma once

#include <cstddef>
#include <functional>

namespace wlab {

/// Worker count: WLAB_THREADS if set (>= 1), otherwise hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is visited
/// exactly once; callers write only to slot i, so results do not depend on
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wlab
