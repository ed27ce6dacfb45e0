#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace leastgrad {

/// Runs fn(row_begin, row_end) over [0, rows) split into contiguous chunks.
/// Per-cell work only; reductions stay serial so results do not depend on
/// the worker count.
template <class Fn>
void parallel_rows(int rows, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(rows, 1));
  if (threads == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(threads - 1));
  const int chunk = (rows + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    const int b = t * chunk;
    const int e = std::min(rows, b + chunk);
    if (b >= e) break;
    workers.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(0, std::min(rows, chunk));
}

}  // namespace leastgrad
