#pragma once
// Parallel batch execution of independent runs. Results land in input order,
// so aggregation is deterministic regardless of worker scheduling.

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "stigmem/engine.hpp"

namespace stigmem {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

inline std::vector<RunRecord> run_batch(const std::vector<ModelConfig>& configs, int jobs = 0) {
    std::vector<RunRecord> results(configs.size());
    if (configs.empty()) return results;
    const int workers = std::min<int>(resolve_jobs(jobs), int(configs.size()));

    if (workers <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) results[i] = run_model(configs[i]);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                results[i] = run_model(configs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

} // namespace stigmem
