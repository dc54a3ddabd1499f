#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace ajm {

/// Number of worker threads to use: explicit request clamped to [1, 64],
/// or the hardware concurrency when the request is 0.
inline int resolve_threads(int requested) {
    if (requested > 0) return std::min(requested, 64);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(std::min(hw, 64u));
}

/// Run fn(begin, end) over [0, n) split into contiguous blocks, one per worker.
/// Results must be written to disjoint locations; fn runs inline for one thread.
template <typename Fn>
void parallel_blocks(int n, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads <= 1) {
        if (n > 0) fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    int chunk = (n + threads - 1) / threads;
    for (int t = 1; t < threads; ++t) {
        int b = t * chunk, e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    fn(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace ajm
