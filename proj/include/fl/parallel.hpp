#pragma once

#include <functional>

namespace fl {

// Worker count used by the batch maps. Defaults to FL_THREADS when set,
// otherwise the hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs fn(i) for i in [0, n). Each index is handled exactly once and results
// must be written to per-index slots, so output does not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace fl
