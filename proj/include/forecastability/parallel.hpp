#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fcast {

/// Worker-thread budget for data-parallel stages. Results never depend on it:
/// every task writes its own output slot and reductions run afterwards in
/// index order.
struct Parallelism {
    unsigned threads = 1;

    [[nodiscard]] static Parallelism hardware() {
        return {std::max(1u, std::thread::hardware_concurrency())};
    }
};

/// Runs fn(i) for i in [0, count). Indices are dealt out in contiguous
/// blocks. If any call throws, the exception from the lowest index is
/// rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t count, Parallelism par, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, par.threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::mutex guard;
    std::exception_ptr first_error;
    std::size_t first_error_index = count;

    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t block = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(count, begin + block);
            if (begin >= end) break;
            pool.emplace_back(run_block, begin, end);
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fcast
