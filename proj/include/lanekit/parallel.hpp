#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lanekit {

/// Thread count resolution: explicit value > 0 wins, else LANEKIT_THREADS,
/// else 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LANEKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results are
/// whatever fn writes into per-index slots; ordering is the caller's index
/// order, so output is independent of the thread count.
template <typename Fn>
void parallel_for(size_t count, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int n = static_cast<int>(std::min(static_cast<size_t>(threads), count));
    pool.reserve(n);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lanekit
