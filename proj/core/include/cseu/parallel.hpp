#pragma once

#include <cstddef>
#include <functional>

namespace cseu {

// Runs fn(i) for i in [0, n). Work is handed out by a shared atomic
// cursor; every fn(i) must be independent and write only to its own slot,
// which keeps results identical for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Compensated (Kahan) accumulator for order-stable pairwise sums.
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

}  // namespace cseu
