#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quenchlab {

namespace detail {
inline std::atomic<int>& worker_override() {
  static std::atomic<int> value{0};
  return value;
}
}  // namespace detail

/// Pin the worker count (0 restores the environment default).
inline void set_worker_limit(int workers) { detail::worker_override() = std::max(0, workers); }

/// QUENCHLAB_THREADS caps workers; otherwise one per hardware thread.
inline int worker_count() {
  if (int pinned = detail::worker_override(); pinned > 0) return pinned;
  if (const char* env = std::getenv("QUENCHLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count). Items are independent work units; callers
/// store per-item results and reduce them in index order afterwards, so the
/// outcome never depends on the number of workers.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace quenchlab
