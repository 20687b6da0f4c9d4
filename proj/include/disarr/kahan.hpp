#ifndef DISARR_KAHAN_HPP
#define DISARR_KAHAN_HPP

#include <cmath>

namespace disarr {

/// Neumaier-compensated accumulator. Summation order is fixed by the caller,
/// so results are reproducible run to run.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace disarr

#endif
