#pragma once

#include <cstddef>
#include <functional>

namespace finsler {

/// Number of workers for a batch of independent jobs: capped by the
/// FINSLER_THREADS environment variable (when set) and by the job count.
std::size_t worker_count(std::size_t jobs);

/// Runs fn(0..count-1) over a small thread pool. Each job writes only its
/// own result slot, so batch output is deterministic regardless of thread
/// count. Exceptions are rethrown on the calling thread (first by index).
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace finsler
