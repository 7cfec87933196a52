#pragma once

#include <functional>

namespace tomo {

/// Number of worker threads used by parallel_chunks. Defaults to the hardware
/// concurrency, capped by the TOMO_THREADS environment variable when set.
int worker_count();

/// Runs fn(chunk_index, begin, end) over [begin, end) split into fixed-size
/// chunks. Chunk boundaries depend only on the range and chunk size, never on
/// the thread count, so work that writes per-chunk buffers merged in chunk
/// order is deterministic on any machine.
void parallel_chunks(int begin, int end, int chunk_size,
                     const std::function<void(int, int, int)>& fn);

}  // namespace tomo
