#pragma once

#include <cmath>
#include <span>

namespace spde_bayes {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
  CompensatedSum &operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      correction_ += (sum_ - t) + x;
    } else {
      correction_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + correction_; }

private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) {
    acc += x;
  }
  return acc.value();
}

} // namespace spde_bayes
