#pragma once

#include <cstddef>
#include <span>

namespace donsker {

// Pairwise tree reduction: fixed association order, so results are
// bit-stable for a given input array regardless of who produced it, and
// rounding error grows like O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 32) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_mean(std::span<const double> xs) {
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace donsker
