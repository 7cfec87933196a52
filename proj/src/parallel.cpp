#include "tomo/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tomo {

int worker_count() {
  static const int cached = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("TOMO_THREADS")) {
      int cap = std::atoi(env);
      if (cap >= 1 && cap < n) n = cap;
    }
    return n;
  }();
  return cached;
}

void parallel_chunks(int begin, int end, int chunk_size,
                     const std::function<void(int, int, int)>& fn) {
  if (end <= begin) return;
  if (chunk_size < 1) chunk_size = 1;
  const int num_chunks = (end - begin + chunk_size - 1) / chunk_size;
  const int workers = std::min(worker_count(), num_chunks);

  auto run_chunk = [&](int ci) {
    const int b = begin + ci * chunk_size;
    const int e = std::min(end, b + chunk_size);
    fn(ci, b, e);
  };

  if (workers <= 1) {
    for (int ci = 0; ci < num_chunks; ++ci) run_chunk(ci);
    return;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int ci = next.fetch_add(1); ci < num_chunks; ci = next.fetch_add(1))
        run_chunk(ci);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tomo
