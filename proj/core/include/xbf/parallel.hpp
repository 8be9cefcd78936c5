#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace xbf {

// XBF_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t worker_count();

// Calls body(i) for i in [0, count) across up to `workers` threads. Each index
// is handled exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body,
                  std::size_t workers = worker_count());

// Engine for random stream k of a run seeded with `seed`.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t k);

// Paths per stream; fixed so results do not depend on the worker count.
inline constexpr std::size_t kStreamChunk = 1024;

} // namespace xbf
