#pragma once

#include <cstddef>
#include <span>

namespace leastgrad {

/// Pairwise (cascade) summation with a fixed split order. The result depends
/// only on the sequence, never on thread count.
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 16;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace leastgrad
