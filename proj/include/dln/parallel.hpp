#pragma once

#include <cstddef>
#include <functional>

namespace dln {

// Number of worker threads a request resolves to (0 = hardware concurrency).
int effective_threads(int requested);

// Blocking parallel map over [0, n) with a shared work counter.  Nested
// calls degrade to serial so only the outermost level fans out.  The
// callable must be thread-safe across distinct indices.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace dln
