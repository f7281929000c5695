#pragma once

#include "mmslab/core.hpp"

#include <functional>

namespace mmslab {

// Worker count: MMSLAB_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n) over contiguous chunks. Each index is visited
// exactly once; callers must only write to per-index slots.
void parallel_for(Index n, const std::function<void(Index)>& body);

} // namespace mmslab
