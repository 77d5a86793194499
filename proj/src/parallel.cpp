#include "dietsonar/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dietsonar {

namespace {
std::atomic<int> g_thread_count{0};
}

void set_thread_count(int n) { g_thread_count.store(n < 0 ? 0 : n); }

int thread_count() {
    const int n = g_thread_count.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

void parallel_chunks(std::int64_t n_items, std::int64_t chunk_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    if (n_items <= 0) return;
    if (chunk_size <= 0) chunk_size = 1;
    const std::int64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
    const int workers = std::min<std::int64_t>(thread_count(), n_chunks);

    auto run_chunk = [&](std::int64_t c) {
        const std::int64_t begin = c * chunk_size;
        const std::int64_t end = std::min(begin + chunk_size, n_items);
        fn(c, begin, end);
    };

    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                run_chunk(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers) - 1);
    for (int i = 0; i < workers - 1; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace dietsonar
