#include "deskstereo/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace deskstereo {

namespace {
std::atomic<int> g_threads{1};
}

int default_threads() { return g_threads.load(); }

void set_default_threads(int n) { g_threads.store(n < 1 ? 1 : n); }

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = default_threads();
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  if (threads > n) threads = n;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace deskstereo
