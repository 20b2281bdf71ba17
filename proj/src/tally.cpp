#include "hbsim/tally.hpp"

#include <algorithm>
#include <cmath>

#include "hbsim/errors.hpp"

namespace hbsim {

void Tally::add(double x) noexcept {
  ++count_;
  sum_ += x;
  sum_sq_ += x * x;
  min_ = std::min(min_, x);
  max_ = std::max(max_, x);
}

TallySummary Tally::summary() const {
  if (count_ == 0) throw EmptyTallyError();
  TallySummary s;
  s.count = count_;
  s.mean = sum_ / static_cast<double>(count_);
  s.min = min_;
  s.max = max_;
  if (count_ > 1) {
    const double n = static_cast<double>(count_);
    const double var = (sum_sq_ - n * s.mean * s.mean) / (n - 1.0);
    s.sd = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return s;
}

}  // namespace hbsim
