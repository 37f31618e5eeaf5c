#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace svysamp {

/// Worker count for Monte Carlo loops: the SAMPLER_THREADS environment
/// variable when set, otherwise hardware concurrency. Always >= 1.
std::size_t worker_count();

/// Programmatic override (0 clears it); takes precedence over the
/// environment. Intended for tests of the determinism contract.
void set_worker_override(std::size_t workers);

/// Runs fn over [0, total) split into fixed chunks of chunk_size replicates.
/// Chunk boundaries depend only on (total, chunk_size), never on the worker
/// count, so per-chunk results indexed by chunk and reduced in chunk order
/// are bit-identical for any number of workers. fn must only touch state
/// owned by its chunk.
void parallel_chunks(std::uint64_t total, std::uint64_t chunk_size,
                     const std::function<void(std::size_t chunk_index,
                                              std::uint64_t begin,
                                              std::uint64_t end)>& fn);

} // namespace svysamp
