#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hsld {

// Worker count: HSLD_THREADS env var if set (>=1), else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("HSLD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return (int)v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

// Runs fn(ctx, i) for i in [begin, end) across up to thread_count() threads.
// make_ctx() is invoked once per worker for per-thread state (e.g. a solver
// with its own factorization).  Indices are handed out dynamically; outputs
// must be addressed by index so the schedule cannot affect results.  The
// first exception thrown by any worker is rethrown on the calling thread.
template <class MakeCtx, class Fn>
void parallel_for_ctx(std::int64_t begin, std::int64_t end, MakeCtx make_ctx, Fn fn) {
    const std::int64_t total = end - begin;
    if (total <= 0) return;
    const int workers = (int)std::min<std::int64_t>(thread_count(), total);
    if (workers == 1) {
        auto ctx = make_ctx();
        for (std::int64_t i = begin; i < end; ++i) fn(ctx, i);
        return;
    }
    std::atomic<std::int64_t> cursor{begin};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            auto ctx = make_ctx();
            for (;;) {
                const std::int64_t i = cursor.fetch_add(1);
                if (i >= end) break;
                fn(ctx, i);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            cursor.store(end);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

template <class Fn>
void parallel_for(std::int64_t begin, std::int64_t end, Fn fn) {
    parallel_for_ctx(
        begin, end, [] { return 0; }, [&](int&, std::int64_t i) { fn(i); });
}

}
