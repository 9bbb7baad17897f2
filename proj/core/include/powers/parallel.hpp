#pragma once

#include <cstddef>
#include <functional>

namespace powers {

/// Worker count for internal parallel loops; capped by the
/// POWERS_CERT_THREADS environment variable when set.
int thread_count();

/// Runs fn over [0, n) split into contiguous chunks, one per worker.
/// Each index is owned by exactly one worker, so loops whose iterations
/// write disjoint outputs stay bit-identical across thread counts.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace powers
