#pragma once

#include <cstddef>
#include <functional>

namespace fpx {

// Worker count: hardware concurrency, optionally capped by the FPX_THREADS
// environment variable (values < 1 mean 1).
int max_threads();

// Runs fn(begin, end) over a block partition of [0, n). Falls back to a
// single inline call when n is small or only one worker is available.
void parallel_for_blocks(size_t n,
                         const std::function<void(size_t, size_t)>& fn);

}  // namespace fpx
