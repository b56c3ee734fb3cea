#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hsad::detail {

// Runs fn(row) for every row in [0, rows). Rows are assigned to workers by
// stride (worker w gets w, w+T, ...), so the work done per row is independent
// of the worker count and results stay bit-identical as long as fn writes
// only to row-disjoint locations. The first exception thrown by any worker
// is rethrown on the calling thread.
inline void parallel_rows(int rows, int workers, const std::function<void(int)>& fn) {
    workers = std::clamp(workers, 1, rows > 0 ? rows : 1);
    if (workers == 1) {
        for (int row = 0; row < rows; ++row) fn(row);
        return;
    }

    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int row = w; row < rows; row += workers) fn(row);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hsad::detail
