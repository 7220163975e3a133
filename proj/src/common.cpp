#include "ntshort/common.hpp"

#include <algorithm>
#include <atomic>

namespace ntshort {

int& global_thread_count() {
    static int n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void parallel_chunks(i64 n_items, const std::function<void(i64, i64, int)>& work,
                     int n_chunks_hint) {
    if (n_items <= 0) return;
    int threads = std::max(1, global_thread_count());
    int n_chunks = n_chunks_hint > 0 ? n_chunks_hint : threads * 4;
    n_chunks = static_cast<int>(std::min<i64>(n_chunks, n_items));
    i64 chunk = (n_items + n_chunks - 1) / n_chunks;

    if (threads == 1 || n_chunks == 1) {
        for (int c = 0; c < n_chunks; ++c) {
            i64 lo = c * chunk, hi = std::min<i64>(n_items, lo + chunk);
            if (lo < hi) work(lo, hi, c);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                int c = next.fetch_add(1);
                if (c >= n_chunks) break;
                i64 lo = c * chunk, hi = std::min<i64>(n_items, lo + chunk);
                if (lo < hi) work(lo, hi, c);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ntshort
