#pragma once
#include <functional>

namespace magbm {

// Worker count used by sweeps and independent solves; 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Each index is handled exactly once and results must be
// written to per-index slots, so output never depends on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace magbm
