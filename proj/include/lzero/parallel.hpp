#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace lzero {

/// Worker count for parallel kernels: LZERO_THREADS when set to a positive
/// integer, otherwise the OpenMP default.
int worker_threads();

/// Evaluates fn(i) for i in [0, count) across OpenMP workers and returns the
/// results in index order. The first exception thrown by any worker is
/// rethrown on the calling thread.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn);

/// Same contract as parallel_map, evaluated in a plain loop.
template <class T>
std::vector<T> serial_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
  return out;
}

namespace detail {
void run_parallel(std::size_t count, const std::function<void(std::size_t)>& body);
}

template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  detail::run_parallel(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace lzero
