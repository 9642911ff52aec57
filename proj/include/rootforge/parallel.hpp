#pragma once

/// @file parallel.hpp
/// @brief Deterministic chunked parallelism. The environment variable
/// RF_THREADS caps the worker count (1 = fully sequential); results are
/// merged in chunk order, so output never depends on scheduling.

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace rf {

inline int thread_budget() {
  if (const char* env = std::getenv("RF_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<int>(v);
    return 1;  // unparseable or out of range: be conservative
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [0, n) into contiguous chunks, evaluates fn(begin, end) per chunk
/// (concurrently when the budget allows), and returns the per-chunk results
/// in chunk order. fn must be pure with respect to shared state.
template <class R, class Fn>
std::vector<R> chunked_map(long long n, Fn fn) {
  std::vector<R> results;
  if (n <= 0) return results;
  int budget = thread_budget();
  long long chunks = budget;
  if (chunks > n) chunks = n;
  if (chunks <= 1) {
    results.push_back(fn(0, n));
    return results;
  }
  results.resize(static_cast<size_t>(chunks));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(chunks));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(chunks));
  for (long long c = 0; c < chunks; ++c) {
    long long begin = n * c / chunks;
    long long end = n * (c + 1) / chunks;
    workers.emplace_back([&, c, begin, end] {
      try {
        results[static_cast<size_t>(c)] = fn(begin, end);
      } catch (...) {
        errors[static_cast<size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace rf
