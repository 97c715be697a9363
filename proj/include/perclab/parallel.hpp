#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace perclab {

/// Resolve a thread-count request: explicit value > 0 wins, then the
/// PERCLAB_THREADS environment variable, then hardware concurrency.
int resolve_threads(int requested);

/// Run fn(i) for i in [0, n). Results must be written to per-index slots so
/// the output is schedule-independent. Exceptions are rethrown (first one).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Cooperative interruption flag (set from a signal handler or the C API);
/// long experiment loops poll it and flush partial results.
std::atomic<bool>& interrupt_flag();

}  // namespace perclab
