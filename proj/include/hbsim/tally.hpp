#pragma once

#include <cstdint>
#include <limits>

namespace hbsim {

struct TallySummary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 when count < 2
  double min = 0.0;
  double max = 0.0;
};

/// Running count/sum/sum-of-squares/min/max accumulator.
class Tally {
 public:
  void add(double x) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double sum() const noexcept { return sum_; }
  double sum_sq() const noexcept { return sum_sq_; }

  /// Throws EmptyTallyError when nothing has been added.
  TallySummary summary() const;

 private:
  std::uint64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace hbsim
