#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace formslab {

inline unsigned default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// Run task(i) for i in [0, n_tasks) on up to `threads` workers and return
/// the per-task results in task order. Callers reduce the returned vector in
/// index order, which keeps every reduction independent of the schedule.
/// The first exception thrown by any task is rethrown on the caller.
template <class Result, class Task>
std::vector<Result> parallel_map(std::size_t n_tasks, unsigned threads, Task&& task) {
    std::vector<Result> results(n_tasks);
    const unsigned workers = static_cast<unsigned>(std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, std::max<std::size_t>(n_tasks, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) results[i] = task(i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_tasks) return;
            try {
                results[i] = task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_tasks, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();  // joins
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace formslab
