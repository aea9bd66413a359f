#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace priceidx {

/// Runs body(0), …, body(jobs-1) on up to `threads` workers (0 = hardware
/// concurrency, 1 = inline on the calling thread). Jobs must be independent
/// and write only to their own output slots, so the combined result is the
/// same for every thread count; the first exception thrown by any job is
/// rethrown on the calling thread.
inline void parallel_for(int jobs, int threads, const std::function<void(int)>& body) {
    if (jobs <= 0) return;
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    if (threads > jobs) threads = jobs;
    if (threads == 1) {
        for (int job = 0; job < jobs; ++job) body(job);
        return;
    }

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        for (;;) {
            const int job = next.fetch_add(1);
            if (job >= jobs) return;
            try {
                body(job);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace priceidx
