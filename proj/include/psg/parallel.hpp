#pragma once

// Worker budget and deterministic reductions.
//
// Every parallel kernel in the library splits its index range into chunks whose
// boundaries depend only on the problem size, never on the worker count. Each
// chunk produces one partial result, stored at its chunk index, and partials
// are combined by pairwise summation in index order. Floating results are
// therefore bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace psg {

/// Worker count from the PSG_WORKERS environment variable, else the hardware
/// concurrency (at least 1).
inline unsigned default_workers() {
  if (const char* env = std::getenv("PSG_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Resolves a requested budget: 0 means "use the default".
inline unsigned resolve_workers(unsigned requested) {
  return requested == 0 ? default_workers() : requested;
}

/// Runs body(chunk_index) for chunk_index in [0, chunks) on at most `workers`
/// threads. The first exception thrown by any chunk is rethrown.
template <class Body>
void parallel_chunks(std::size_t chunks, unsigned workers, Body&& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Fixed chunk layout over [0, n): chunk c covers [c*size, min(n, (c+1)*size)).
struct ChunkLayout {
  std::size_t n = 0;
  std::size_t size = 1;

  std::size_t count() const { return n == 0 ? 0 : (n + size - 1) / size; }
  std::size_t begin(std::size_t c) const { return c * size; }
  std::size_t end(std::size_t c) const { return std::min(n, (c + 1) * size); }
};

/// Pairwise (cascade) summation in index order.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

/// Maps each fixed chunk of [0, n) to a partial with chunk_fn(begin, end) and
/// reduces the partials pairwise. Deterministic for any worker count.
template <class T, class ChunkFn>
T chunked_reduce(std::size_t n, std::size_t chunk_size, unsigned workers, ChunkFn&& chunk_fn) {
  const ChunkLayout layout{n, std::max<std::size_t>(1, chunk_size)};
  std::vector<T> partial(layout.count());
  parallel_chunks(partial.size(), workers, [&](std::size_t c) {
    partial[c] = chunk_fn(layout.begin(c), layout.end(c));
  });
  return pairwise_sum(partial);
}

}  // namespace psg
