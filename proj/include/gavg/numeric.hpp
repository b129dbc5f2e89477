#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gavg {

// Kahan-compensated accumulator, fixed left-to-right order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Balanced-tree sum. For 2^k equal summands every partial is a pure
// doubling, so the result is exact.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() == 1) return xs[0];
  const std::size_t mid = xs.size() / 2;
  return pairwise_sum(xs.first(mid)) + pairwise_sum(xs.subspan(mid));
}

// Sorts ascending, then pairwise-sums: the result depends only on the
// multiset of summands, never on their input order.
inline double order_independent_sum(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  return pairwise_sum(xs);
}

}  // namespace gavg
