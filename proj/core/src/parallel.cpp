#include "torograph/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace torograph {

std::size_t thread_limit() {
  if (const char* env = std::getenv("TOROGRAPH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_blocks(std::size_t count, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t n_blocks = (count + block_size - 1) / block_size;
  const std::size_t workers = std::min(thread_limit(), n_blocks);

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    const std::size_t end = std::min(begin + block_size, count);
    fn(b, begin, end);
  };

  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
        run_block(b);
      }
    });
  }
  for (auto& t : pool) t.join();
}

void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn) {
  parallel_blocks(count, 1, [&](std::size_t, std::size_t begin, std::size_t) { fn(begin); });
}

}  // namespace torograph
