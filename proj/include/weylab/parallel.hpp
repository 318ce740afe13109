#pragma once

// Deterministic block-parallel reduction.
//
// Work is split into fixed-size blocks; each block produces a partial result
// into its own slot, and the slots are combined in block order afterwards.
// The reduction tree therefore does not depend on the thread count, so sums
// of floating-point data are bit-stable whether run with 1 thread or 64.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace weylab {

inline unsigned effective_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// fn(block_index) is called exactly once for every block in [0, n_blocks).
template <class Fn>
void for_each_block(std::size_t n_blocks, unsigned threads, Fn&& fn) {
    threads = effective_threads(threads);
    if (threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) break;
            fn(b);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<std::size_t>(threads, n_blocks);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace weylab
