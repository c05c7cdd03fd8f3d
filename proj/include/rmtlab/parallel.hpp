#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace rmtlab {

/// Worker count: RMT_LAB_THREADS if set, else the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("RMT_LAB_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested > 0) return static_cast<unsigned>(requested);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on a worker pool. Results are stored by index,
/// so the output does not depend on scheduling. The first exception is rethrown.
template <class F>
auto parallel_trials(std::size_t count, F&& fn) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using Result = std::invoke_result_t<F&, std::size_t>;
    static_assert(!std::is_same_v<Result, bool>, "std::vector<bool> elements cannot be written concurrently");
    std::vector<Result> results(count);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!stop.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                stop = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace rmtlab
