#include "sasfocus/threading.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sasfocus {

namespace {
std::size_t g_thread_count = 0;
}

void set_thread_count(std::size_t n) { g_thread_count = n; }

std::size_t thread_count() {
  if (g_thread_count > 0) return g_thread_count;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sasfocus
