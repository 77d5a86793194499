#pragma once

#include <cstdint>
#include <functional>

namespace dietsonar {

// Process-wide worker count. 0 = pick automatically (min(hardware, 8)).
void set_thread_count(int n);
int thread_count();

// Runs fn(chunk_index, begin, end) over fixed [begin, end) ranges of size
// chunk_size (last chunk short). Chunk boundaries depend only on n_items and
// chunk_size, never on the worker count, so any per-chunk outputs are
// reproducible for any thread count; reductions over chunk outputs must be
// performed by the caller in chunk order.
void parallel_chunks(std::int64_t n_items, std::int64_t chunk_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

}  // namespace dietsonar
