#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace blinkid {

// Splits [0, total) into contiguous chunks, one per thread, and runs
// fn(chunk_index, begin, end). fn must only touch state owned by its chunk;
// callers merge per-chunk results in chunk order so the outcome does not
// depend on the thread count.
inline void parallel_chunks(int64_t total, int threads,
                            const std::function<void(int, int64_t, int64_t)>& fn) {
    if (total <= 0) return;
    if (threads < 1) threads = 1;
    if (int64_t(threads) > total) threads = int(total);
    if (threads == 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    const int64_t base = total / threads;
    const int64_t rem = total % threads;
    int64_t begin = 0;
    for (int t = 0; t < threads; ++t) {
        const int64_t end = begin + base + (t < rem ? 1 : 0);
        pool.emplace_back(fn, t, begin, end);
        begin = end;
    }
    for (auto& th : pool) th.join();
}

} // namespace blinkid
