#pragma once

#include <cstddef>
#include <functional>

namespace drttp {

// Worker count: hardware concurrency capped by the DRTTP_THREADS environment variable.
unsigned worker_count();

// Runs f(i) for i in [0, n) on up to worker_count() threads; exceptions are rethrown in order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace drttp
