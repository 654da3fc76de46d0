#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lpm {

/// Runs body(chunk, begin, end) over [0, n) split into `threads` contiguous
/// chunks. The exception of the lowest-numbered failing chunk is rethrown, so
/// error reporting does not depend on scheduling.
template <class Body>
void parallel_chunks(std::size_t n, int threads, Body&& body) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
  if (t == 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  auto run = [&](std::size_t c) {
    try {
      body(c, n * c / t, n * (c + 1) / t);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  for (std::size_t c = 1; c < t; ++c) pool.emplace_back(run, c);
  run(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace lpm
