// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace currents {

/// Worker count from CURRENTS_WORKERS, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("CURRENTS_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(i) for i in [0, n). Each index must be an independent pure
// computation writing only to its own slot; reductions happen after, in
// index order, so the worker count never changes results.
inline void parallel_for(size_t n, const std::function<void(size_t)>& f) {
    const int workers = worker_count();
    if (workers == 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto body = [&]() {
        const size_t chunk = std::max<size_t>(1, n / (8 * workers));
        for (;;) {
            const size_t begin = next.fetch_add(chunk);
            if (begin >= n) break;
            const size_t end = std::min(n, begin + chunk);
            for (size_t i = begin; i < end; ++i) f(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 0; t + 1 < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace currents
