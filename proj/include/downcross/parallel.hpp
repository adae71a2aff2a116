#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace downcross {

// Runs body(replica, acc) for replica in [0, n), partitioned into contiguous
// blocks per thread; block accumulators are merged in block order, so the
// result is independent of the thread count.  Replica work must derive all
// randomness from the replica index.
template <class Acc, class Body, class Merge>
Acc parallel_replicas(std::int64_t n, int threads, Acc init, Body body, Merge merge) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (static_cast<std::int64_t>(threads) > n) threads = static_cast<int>(n);

  std::vector<Acc> slots(static_cast<std::size_t>(threads), init);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = n * t / threads;
    const std::int64_t hi = n * (t + 1) / threads;
    pool.emplace_back([&, t, lo, hi] {
      for (std::int64_t r = lo; r < hi; ++r) body(r, slots[static_cast<std::size_t>(t)]);
    });
  }
  for (std::thread& th : pool) th.join();

  Acc out = std::move(slots[0]);
  for (int t = 1; t < threads; ++t) merge(out, slots[static_cast<std::size_t>(t)]);
  return out;
}

}  // namespace downcross
