#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace casimir {

// Fixed-tree pairwise summation: the result does not depend on how the
// inputs were produced (worker count, chunking).
inline double pairwise_sum(std::span<const double> v) {
    if (v.empty()) return 0.0;
    std::vector<double> buf(v.begin(), v.end());
    std::size_t n = buf.size();
    while (n > 1) {
        std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
        if (n % 2 == 1) {
            buf[half] = buf[n - 1];
            ++half;
        }
        n = half;
    }
    return buf[0];
}

struct MeanStdErr {
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean and jackknife standard error of the mean over independent blocks
// (for the sample mean the jackknife reduces to sqrt(sum (x-m)^2/(n(n-1)))).
inline MeanStdErr block_mean_stderr(std::span<const double> blocks) {
    MeanStdErr out;
    const std::size_t n = blocks.size();
    if (n == 0) return out;
    out.mean = pairwise_sum(blocks) / static_cast<double>(n);
    if (n < 2) return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = blocks[i] - out.mean;
        sq[i] = d * d;
    }
    out.std_error = std::sqrt(pairwise_sum(sq) / (static_cast<double>(n) * (n - 1.0)));
    return out;
}

// Runs fn(i) for i in [0, n) across the given worker count; workers write to
// disjoint indices so results are identical for any worker count.
inline void parallel_for_index(long long n, int threads, const std::function<void(long long)>& fn) {
    if (threads <= 1 || n < 2) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int t_count = static_cast<int>(std::min<long long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(t_count);
    for (int t = 0; t < t_count; ++t) {
        pool.emplace_back([&, t]() {
            const long long lo = n * t / t_count;
            const long long hi = n * (t + 1) / t_count;
            for (long long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace casimir
