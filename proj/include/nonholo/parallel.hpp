// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace nonholo {

/// Worker cap: NONHOLO_THREADS when set, hardware concurrency otherwise.
inline int max_threads() {
    if (const char* env = std::getenv("NONHOLO_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs f(i) for i in [0, count); results must be written into
/// index-addressed slots so the outcome is independent of scheduling.
template <class F>
void parallel_for(int count, F&& f) {
    const int workers = std::min(max_threads(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace nonholo
