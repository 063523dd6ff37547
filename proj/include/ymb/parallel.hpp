#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ymb {

/// Worker cap for data-parallel loops; 0 or 1 means sequential.
int worker_count();
void set_worker_count(int n);

/// Runs fn(i) for i in [0, n).  Work is handed out in fixed-size chunks so
/// the assignment of iterations to chunks never depends on the thread count.
template <class F>
void parallel_for(size_t n, F&& fn, size_t chunk = 256) {
    const int workers = worker_count();
    if (workers <= 1 || n < 2 * chunk) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto body = [&] {
        for (;;) {
            const size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const size_t end = std::min(begin + chunk, n);
            for (size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers - 1; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

/// Deterministic reduction: per-chunk compensated partial sums combined in
/// chunk order, so the result is bit-identical for any thread count.
template <class F>
double parallel_reduce(size_t n, F&& term, size_t chunk = 256) {
    const size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(nchunks, 0.0);
    parallel_for(
        nchunks,
        [&](size_t ci) {
            const size_t begin = ci * chunk;
            const size_t end = std::min(begin + chunk, n);
            double s = 0.0, c = 0.0;
            for (size_t i = begin; i < end; ++i) {
                const double y = term(i) - c;
                const double t = s + y;
                c = (t - s) - y;
                s = t;
            }
            partial[ci] = s;
        },
        1);
    double s = 0.0, c = 0.0;
    for (double v : partial) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace ymb
