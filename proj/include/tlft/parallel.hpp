#pragma once

#include <cstddef>
#include <functional>

namespace tlft {

// Worker cap: TLFT_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers write
// results into per-index slots, so scheduling never changes the output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tlft
