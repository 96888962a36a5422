#ifndef HULLCERT_PARALLEL_HPP
#define HULLCERT_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hullcert {

/// Worker count from HULLCERT_THREADS; 0, unset or unparsable means all cores.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("HULLCERT_THREADS")) {
        char* end = nullptr;
        const unsigned long requested = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && requested > 0) {
            return requested;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Runs fn(i) for i in [0, n) across worker threads. Each index is visited
 * exactly once, so callers writing to slot i get the same result regardless
 * of thread count. The first exception thrown (lowest index) is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }

    std::mutex guard;
    std::exception_ptr first_error;
    std::size_t first_error_index = n;

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(guard);
                    if (i < first_error_index) {
                        first_error_index = i;
                        first_error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace hullcert

#endif
