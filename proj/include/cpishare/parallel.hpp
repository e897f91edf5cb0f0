#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpishare {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(begin, end) over disjoint blocks of [0, n) on `threads` workers.
/// Blocks are handed out by an atomic counter; callers must make per-index
/// results independent of the block-to-worker assignment.
template <typename Fn>
void parallel_blocks(std::size_t n, int threads, std::size_t block, Fn&& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads == 1 || n <= block) {
        fn(std::size_t{0}, n);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            std::size_t begin = next.fetch_add(block, std::memory_order_relaxed);
            if (begin >= n) break;
            std::size_t end = std::min(begin + block, n);
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!failed.exchange(true)) error = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();  // join
    if (error) std::rethrow_exception(error);
}

}  // namespace cpishare
