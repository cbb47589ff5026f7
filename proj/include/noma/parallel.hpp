#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace noma::detail {

/// Splits [0, count) into contiguous blocks and runs body(begin, end, block)
/// on up to `workers` threads.
template <typename Body>
void parallel_blocks(std::uint64_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  const std::uint64_t blocks = std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1));
  if (blocks <= 1) {
    body(std::uint64_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t begin = count * b / blocks;
    const std::uint64_t end = count * (b + 1) / blocks;
    pool.emplace_back([&body, begin, end, b] { body(begin, end, static_cast<std::size_t>(b)); });
  }
}

inline unsigned block_count(std::uint64_t count, unsigned workers) {
  return static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(1u, workers), std::max<std::uint64_t>(count, 1)));
}

}  // namespace noma::detail
