#pragma once

#include <cstddef>
#include <functional>

namespace torograph {

/// Worker-thread cap: the TOROGRAPH_THREADS environment variable when set
/// to a positive integer, otherwise std::thread::hardware_concurrency().
std::size_t thread_limit();

/// Runs fn(block_index, begin, end) over [0, count) split into fixed-size
/// blocks. Block boundaries depend only on (count, block_size), never on
/// the thread count, so callers that reduce per-block partials in block
/// order get bit-identical results under any parallelism.
void parallel_blocks(std::size_t count, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Runs fn(i) for i in [0, count) on the worker pool. Each index must write
/// only to its own slot.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace torograph
