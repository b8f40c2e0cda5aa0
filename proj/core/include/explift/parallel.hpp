#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace explift {

// Evaluates fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency) and returns the results in index order. Each index must draw
// its randomness from its own keyed stream so the output is independent of
// scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, Fn&& fn, unsigned threads = 0) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace explift
