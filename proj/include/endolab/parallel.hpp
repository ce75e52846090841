#pragma once

// Static-schedule parallel loop. Work item i always runs with the same chunk
// decomposition given the same (n, threads), and reductions are expected to
// merge per-index results in index order, so outputs do not depend on timing.

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace endolab {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// calls body(worker, i) for i in [0, n), each worker id in its own thread;
// rethrows the first captured exception
inline void parallel_for_workers(std::size_t n, unsigned threads,
                                 const std::function<void(unsigned, std::size_t)>& body) {
    threads = resolve_threads(threads);
    if (threads > n) threads = unsigned(n == 0 ? 1 : n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(0, i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            std::size_t lo = n * t / threads;
            std::size_t hi = n * (t + 1) / threads;
            try {
                for (std::size_t i = lo; i < hi; ++i) body(t, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
    parallel_for_workers(n, threads, [&](unsigned, std::size_t i) { body(i); });
}

}  // namespace endolab
