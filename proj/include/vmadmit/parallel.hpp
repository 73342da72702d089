#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vmadmit {

/**
 * Runs fn(i) for i in [0, count) across a static partition of worker threads.
 * threads == 0 uses the hardware concurrency. The first exception thrown by
 * any worker is rethrown on the calling thread after all workers join, so
 * results written by index stay deterministic regardless of thread count.
 */
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = 0) {
    if (count == 0) return;
    unsigned n = threads ? threads : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (std::size_t(n) > count) n = unsigned(count);

    if (n == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        workers.emplace_back([&, w] {
            const std::size_t begin = count * w / n;
            const std::size_t end = count * (w + 1) / n;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    if (error) std::rethrow_exception(error);
}

/// Pairwise sum: deterministic for a fixed vector and accurate to well over
/// 12 significant digits at the sizes used here.
inline double pairwise_sum(const double* data, std::size_t count) {
    if (count <= 8) {
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) total += data[i];
        return total;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& data) {
    return pairwise_sum(data.data(), data.size());
}

} // namespace vmadmit
