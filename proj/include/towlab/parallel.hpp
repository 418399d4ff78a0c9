#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace towlab {

// Static chunking over [0, count). Work items write to disjoint slots, so the
// result is independent of the thread count.
template <typename Fn>
void parallel_for(int64_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        fn(int64_t{0}, count);
        return;
    }
    const int workers = static_cast<int>(std::min<int64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int64_t b = w * chunk;
        const int64_t e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

// Pairwise (cascade) summation: associative reduction fixed by the array
// order, so totals are bit-identical for any thread count upstream.
inline double pairwise_sum(const double* data, int64_t count) {
    if (count <= 32) {
        double s = 0;
        for (int64_t i = 0; i < count; ++i) s += data[i];
        return s;
    }
    const int64_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

}  // namespace towlab
