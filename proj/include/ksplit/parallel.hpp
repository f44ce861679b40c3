#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ksplit {

// Runs fn(i) for i in [0, count) on at most `jobs` threads.  Callers write
// results into index-addressed slots, so the outcome does not depend on the
// schedule.
template <typename Fn>
void parallel_for(int jobs, std::size_t count, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(jobs, count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ksplit
