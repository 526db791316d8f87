#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hetalign {

/// Runs `fn(block)` for every block in [0, num_blocks) on up to `workers`
/// threads. Blocks are claimed dynamically, so callers that need a
/// deterministic result must write into per-block storage and combine it in
/// block order. The first exception thrown by any block is rethrown here
/// after all threads have joined.
template <typename Fn>
void parallel_blocks(std::size_t workers, std::size_t num_blocks, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, num_blocks));
    if (workers == 1) {
        for (std::size_t b = 0; b < num_blocks; ++b) {
            fn(b);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&]() {
        for (;;) {
            const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= num_blocks) {
                return;
            }
            try {
                fn(b);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(num_blocks, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace hetalign
