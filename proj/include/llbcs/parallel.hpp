#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace llbcs {

/// Runs fn(0..n_tasks-1) on `workers` threads (0 = hardware concurrency).
/// Tasks are claimed from a shared counter; the first exception is rethrown
/// in the caller after all threads join. Callers must make task results
/// independent of claiming order (e.g. write into preallocated slots).
inline void parallel_for_each_index(std::size_t n_tasks, int workers,
                                    const std::function<void(std::size_t)>& fn) {
  if (workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw > 0 ? static_cast<int>(hw) : 1;
  }
  if (workers == 1 || n_tasks <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const int n_threads = std::min<std::size_t>(workers, n_tasks);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace llbcs
