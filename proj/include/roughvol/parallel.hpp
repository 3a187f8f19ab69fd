#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace roughvol {

// Global worker cap shared by all modules. 0 means "use hardware concurrency".
inline std::atomic<unsigned>& thread_cap() {
    static std::atomic<unsigned> cap{0};
    return cap;
}

inline unsigned effective_threads(std::size_t items) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned cap = thread_cap().load();
    if (cap != 0) hw = std::min(hw, cap);
    return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(items, 1)));
}

// Deterministic parallel loop: the index space is split into contiguous chunks,
// each chunk runs on one worker, and any reduction the caller performs over
// chunk results must use the chunk order, never completion order.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    if (count == 0) return;
    unsigned workers = effective_threads(count);
    if (workers <= 1) {
        chunk_fn(0, count);
        return;
    }
    std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= count) break;
        std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

} // namespace roughvol
