#include "sim/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sim {

namespace {

std::size_t auto_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::size_t from_env() {
    const char* env = std::getenv("SIM_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    try {
        return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
        return 0;
    }
}

std::atomic<std::size_t>& override_slot() {
    static std::atomic<std::size_t> slot{static_cast<std::size_t>(-1)};
    return slot;
}

}  // namespace

std::size_t worker_count() {
    const std::size_t forced = override_slot().load();
    if (forced != static_cast<std::size_t>(-1)) return forced == 0 ? auto_workers() : forced;
    static const std::size_t env = from_env();
    return env == 0 ? auto_workers() : env;
}

void set_worker_count(std::size_t n) { override_slot().store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(n, begin + block);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sim
