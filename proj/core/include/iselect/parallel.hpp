#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace iselect {

/// Worker count from ISELECT_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Calls body(i) for every i in [0, n) on up to `workers` threads
/// (0 = worker_count()). Indices are handed out in chunks; body must only
/// write to per-index state. The first exception thrown by any body is
/// rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

/// Per-trajectory random stream.
using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream for trajectory `index` of a run seeded with `master_seed`; depends
/// only on the pair, never on scheduling.
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  return RandomStream(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace iselect
