#ifndef HOMOG_PARALLEL_HPP
#define HOMOG_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace homog
{

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// interleaved partition. Callers write into per-index slots and reduce in
/// index order afterwards, so results never depend on the thread count.
template <typename Body>
void parallel_for(int n, int threads, Body && body)
{
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) {
          body(i);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto & th : pool) {
    th.join();
  }
  for (auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace homog

#endif
