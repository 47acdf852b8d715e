#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fso {

inline int max_workers() {
  if (const char* env = std::getenv("FSO_MAX_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count) on up to max_workers() threads. fn must be
// safe to call concurrently for distinct i.
inline void parallel_for(long count, const std::function<void(long)>& fn) {
  const int workers = std::min<long>(max_workers(), count);
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<long> next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace fso
