#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tiletopo {

// Worker cap shared by the library; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(block_index, begin, end) over fixed, contiguous blocks of [0, n).
// Block boundaries depend only on n and block_size, so per-block results can
// be merged in block order independent of the worker count.
template <class Fn>
void parallel_blocks(std::size_t n, std::size_t block_size, Fn&& fn) {
  if (n == 0) return;
  const std::size_t blocks = (n + block_size - 1) / block_size;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), blocks));
  auto run = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    fn(b, begin, std::min(n, begin + block_size));
  };
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < blocks; b += workers) run(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tiletopo
