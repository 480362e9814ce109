#pragma once

#include <cstdint>
#include <functional>

namespace jsrec {

// Worker count: JSREC_THREADS if set (clamped to >= 1), else hardware
// concurrency.
int thread_budget();

// Runs body(i) for i in [0, count). Work is split into contiguous blocks;
// bodies must be independent. Exceptions from workers are rethrown on the
// calling thread.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body);

}  // namespace jsrec
