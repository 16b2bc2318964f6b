#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parsol {

// Runs fn(i) for i in [0, count) across hardware threads. Blocks until all
// chunks finish; the first exception thrown by any worker is rethrown.
// fn must only write to per-index state, results stay deterministic because
// work is keyed by index, not by thread.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned num_threads = 0) {
    if (count == 0) return;
    if (num_threads == 0) num_threads = std::max(1u, std::thread::hardware_concurrency());
    num_threads = static_cast<unsigned>(std::min<std::size_t>(num_threads, count));

    if (num_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(num_threads);

    const std::size_t chunk = (count + num_threads - 1) / num_threads;
    for (unsigned t = 0; t < num_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace parsol
