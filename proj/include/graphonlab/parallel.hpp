#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace graphonlab {

/// Worker count from GRAPHONLAB_THREADS, default 1.
inline int default_threads() {
  if (const char* env = std::getenv("GRAPHONLAB_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

/// results[i] = fn(i) for i < count, computed on up to `threads` workers.
/// Output order is the index order regardless of scheduling.
template <typename Fn>
auto parallel_map(int count, int threads, Fn fn) -> std::vector<decltype(fn(0))> {
  using T = decltype(fn(0));
  std::vector<T> results(static_cast<std::size_t>(std::max(count, 0)));
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) results[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace graphonlab
