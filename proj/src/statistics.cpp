#include "hbsim/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hbsim/errors.hpp"
#include "hbsim/tally.hpp"

namespace hbsim {

namespace {

constexpr std::array<double, 30> kT975 = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

}  // namespace

double t_quantile_975(std::uint32_t df) {
  if (df == 0) throw ParameterError("t quantile needs df >= 1");
  if (df <= kT975.size()) return kT975[df - 1];
  const double z = 1.959963984540054;
  const double v = df;
  const double z3 = z * z * z;
  const double z5 = z3 * z * z;
  return z + (z3 + z) / (4.0 * v) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * v * v);
}

std::optional<double> ci95_halfwidth(std::span<const double> samples) {
  if (samples.size() < 2) return std::nullopt;
  Tally t;
  for (double x : samples) t.add(x);
  const TallySummary s = t.summary();
  const auto m = static_cast<std::uint32_t>(samples.size());
  return t_quantile_975(m - 1) * s.sd / std::sqrt(double(m));
}

SweepSummary aggregate(const ExperimentConfig& cfg,
                       std::span<const RunOutput> outputs) {
  if (outputs.empty()) throw ParameterError("aggregate needs at least one run");
  std::vector<double> means;
  means.reserve(outputs.size());
  Tally t;
  for (const RunOutput& o : outputs) {
    means.push_back(o.summary.mean_inconsistent);
    t.add(o.summary.mean_inconsistent);
  }
  const TallySummary s = t.summary();
  SweepSummary out;
  out.fingerprint = cfg.fingerprint();
  out.nodes = cfg.nodes;
  out.rate_pct_per_min = cfg.failure.rate_pct_per_min;
  out.protocol = cfg.protocol.kind;
  out.runs = static_cast<std::uint32_t>(outputs.size());
  // Rounding in sum / count must not push the mean outside [min, max].
  out.mean = std::clamp(s.mean, s.min, s.max);
  out.sd = s.sd;
  out.min = s.min;
  out.max = s.max;
  out.ci95_halfwidth = ci95_halfwidth(means);
  out.normalized_mean = out.mean / double(cfg.nodes);
  return out;
}

}  // namespace hbsim
