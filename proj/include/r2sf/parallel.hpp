#pragma once

// Chunked data parallelism with a fixed chunking that does not depend on the
// worker count, so merged results are identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace r2sf {

// R2SF_WORKERS if set and positive, else the hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("R2SF_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

inline std::uint64_t chunk_count(std::uint64_t n, std::uint64_t max_chunks = 256) {
  return std::max<std::uint64_t>(1, std::min(n, max_chunks));
}

// Calls fn(chunk, begin, end) for every chunk of [0, n). Chunk boundaries
// depend only on n and max_chunks.
template <class Fn>
void parallel_chunks(std::uint64_t n, unsigned workers, Fn&& fn, std::uint64_t max_chunks = 256) {
  const std::uint64_t chunks = chunk_count(n, max_chunks);
  auto bounds = [&](std::uint64_t c) { return std::pair{n * c / chunks, n * (c + 1) / chunks}; };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      fn(c, b, e);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= chunks) return;
        try {
          auto [b, e] = bounds(c);
          fn(c, b, e);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next.store(chunks);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace r2sf
