#include "lzero/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>

#include <omp.h>

namespace lzero {

int worker_threads() {
  if (const char* env = std::getenv("LZERO_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

namespace detail {

void run_parallel(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first;
  std::mutex guard;
  std::atomic<bool> stop{false};
  const long n = static_cast<long>(count);
  const int threads = worker_threads();
  const long chunk = std::max(1L, n / (16L * threads));
#pragma omp parallel for schedule(dynamic, chunk) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    if (stop.load(std::memory_order_relaxed)) continue;
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
      stop = true;
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace detail
}  // namespace lzero
