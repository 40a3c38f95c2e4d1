#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gsql::detail {

// Splits [0, n) into contiguous chunks and runs fn(chunk, begin, end) on up to
// `threads` workers. Chunk boundaries depend only on n and the chunk count, so
// callers that concatenate per-chunk output in chunk order get results that
// are independent of scheduling.
template <typename F>
void parallel_chunks(std::size_t n, int threads, std::size_t chunks, F&& fn) {
  if (n == 0) return;
  chunks = std::max<std::size_t>(1, std::min(chunks, n));
  auto bounds = [&](std::size_t c) { return c * n / chunks; };
  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        try {
          fn(c, bounds(c), bounds(c + 1));
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Report the error of the earliest chunk, as a sequential run would.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Chunk count used for row-parallel work: a fixed function of n so results do
// not depend on the thread count.
inline std::size_t default_chunks(std::size_t n) {
  constexpr std::size_t kGrain = 4096;
  return std::max<std::size_t>(1, std::min<std::size_t>(64, (n + kGrain - 1) / kGrain));
}

}  // namespace gsql::detail
