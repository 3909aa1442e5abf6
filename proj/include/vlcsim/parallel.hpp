#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace vlcsim {

/// Run fn(i) for i in [0, count) on up to `jobs` threads. Tasks must write
/// results into per-index slots; reductions belong to the caller so that the
/// outcome cannot depend on scheduling.
template <typename Fn>
void parallel_for(int jobs, int count, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, count);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

/// Default worker count: the VLCSIM_JOBS environment variable when set,
/// otherwise 1.
inline int default_jobs() {
    if (const char* env = std::getenv("VLCSIM_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace vlcsim
