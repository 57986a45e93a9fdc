#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace blf {

inline unsigned worker_count() {
    if (const char* env = std::getenv("BLFRAME_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for i in [begin, end) on a small thread pool. fn must not touch
// shared mutable state except through disjoint indices.
template <class Fn>
void parallel_for(long begin, long end, Fn&& fn) {
    const long count = end - begin;
    if (count <= 0) return;
    const unsigned workers = std::min<long>(worker_count(), count);
    if (workers <= 1) {
        for (long i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const long lo = begin + static_cast<long>(w) * chunk;
        const long hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace blf
