#pragma once

#include <cstddef>
#include <functional>

namespace tomokernel {

// Number of worker threads used by grid sweeps. Defaults to the hardware
// concurrency, capped by the TOMOKERNEL_THREADS environment variable.
unsigned worker_count();

// Runs body(i) for i in [0, n) split into contiguous chunks across workers.
// body must only write to locations owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tomokernel
