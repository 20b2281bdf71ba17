#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "hbsim/config.hpp"
#include "hbsim/simulation.hpp"

namespace hbsim {

/// Two-sided 97.5% Student t quantile. Table values for df 1..30; beyond
/// that a Cornish-Fisher expansion around the normal quantile 1.959964.
double t_quantile_975(std::uint32_t df);

/// t(0.975, m-1) * sd / sqrt(m); nullopt for fewer than two samples.
std::optional<double> ci95_halfwidth(std::span<const double> samples);

/// Cross-run statistics of one configuration. The sample unit is each
/// run's time-averaged probe count.
struct SweepSummary {
  std::string fingerprint;
  std::uint32_t nodes = 0;
  double rate_pct_per_min = 0.0;
  ProtocolKind protocol = ProtocolKind::simple_p2p;
  std::uint32_t runs = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> ci95_halfwidth;
  double normalized_mean = 0.0;  // mean / nodes
};

/// Requires at least one run output.
SweepSummary aggregate(const ExperimentConfig& cfg,
                       std::span<const RunOutput> outputs);

}  // namespace hbsim
