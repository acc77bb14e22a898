#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace klsum {

// Splits [0, n) into `threads` contiguous chunks, runs body(begin, end)
// on each, and returns the per-chunk results in chunk order. With threads = 1
// the single chunk runs on the calling thread, so results are bit-reproducible.
template <typename Result, typename Body>
std::vector<Result> parallel_chunks(std::size_t n, unsigned threads, Body body) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  std::vector<Result> results(chunks);
  auto run = [&](std::size_t c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    results[c] = body(begin, end);
  };
  if (chunks == 1) {
    run(0);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) pool.emplace_back(run, c);
  run(0);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace klsum
