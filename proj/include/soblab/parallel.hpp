#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

// Bounded worker pool for embarrassingly parallel trial/restart loops.
// Every job is deterministic given its index, and callers merge results with
// order-independent reductions, so parallelism never changes outputs.

namespace soblab {

inline int worker_count() {
    if (const char* env = std::getenv("SOBLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs body(i) for i in [0, n) on at most worker_count() threads.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace soblab
