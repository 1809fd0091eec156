#pragma once

#include <cstddef>
#include <functional>

namespace geomorph {

/// Name of the environment variable that caps worker threads.
inline constexpr const char* kMaxThreadsEnv = "GEOMORPH_MAX_THREADS";

/// Worker count for a request: 0 means hardware concurrency. The result is
/// capped by GEOMORPH_MAX_THREADS when that is set to a positive integer,
/// and is always at least 1.
int resolve_workers(int requested);

/// Runs fn(i) for every i in [0, n) on up to `workers` threads. Every index
/// runs even if some throw; afterwards the exception from the lowest failing
/// index is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

} // namespace geomorph
