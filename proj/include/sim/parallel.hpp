#pragma once

#include <cstddef>
#include <functional>

namespace sim {

/// Worker count used by all compute stages. Read once from SIM_THREADS
/// (unset or 0 means hardware concurrency) unless overridden.
std::size_t worker_count();

/// Overrides the worker count for the rest of the process; 0 restores auto.
void set_worker_count(std::size_t n);

/// Calls fn(i) exactly once for every i in [0, n), split into contiguous
/// blocks across workers. Callers write results by index, so output never
/// depends on the worker count. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sim
