#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lowcon {

/// Pairwise (cascade) summation. Deterministic for a fixed element order and
/// with O(log n) rounding error growth; all quadratures and inner products in
/// the library reduce through this.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v));
}

}  // namespace lowcon
