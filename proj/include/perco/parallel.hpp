#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace perco {

/// Worker count to use for a requested value; 0 means all hardware threads.
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Number of workers parallel_for starts for `count` items.
inline std::size_t worker_count(std::size_t count, unsigned threads) {
    return std::max<std::size_t>(1, std::min<std::size_t>(resolve_threads(threads), count));
}

/// Calls fn(worker, i) for every i in [0, count) on worker_count(count,
/// threads) workers, worker in [0, worker_count). Each index is handled
/// exactly once; callers keep results deterministic by writing only to slot
/// i (per-worker state is scratch). The first exception thrown by any call
/// is rethrown after all workers have joined.
template <typename Fn>
void parallel_for_workers(std::size_t count, unsigned threads, Fn&& fn) {
    const std::size_t workers = worker_count(count, threads);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(std::size_t{0}, i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&](std::size_t worker) {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count)
                return;
            try {
                fn(worker, i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t)
        pool.emplace_back(work, t);
    work(std::size_t{0});
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

/// parallel_for_workers without the worker index.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    parallel_for_workers(count, threads, [&fn](std::size_t, std::size_t i) { fn(i); });
}

} // namespace perco
