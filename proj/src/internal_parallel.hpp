#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fracspec::detail {

// Static row partition: worker t handles rows [t*chunk, ...). Each row is
// computed independently from shared read-only tables, so the result is
// bitwise identical to the serial loop for any thread count.
inline void parallel_rows(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(std::size_t(threads), count);
  const std::size_t chunk = (count + nt - 1) / nt;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fracspec::detail
