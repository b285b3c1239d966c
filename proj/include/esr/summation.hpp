#pragma once

#include <cmath>

namespace esr {

// Neumaier-compensated accumulator. The subset expansions are alternating
// sums whose terms can exceed the result by many orders of magnitude;
// plain accumulation loses digits long before the terms themselves do.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace esr
