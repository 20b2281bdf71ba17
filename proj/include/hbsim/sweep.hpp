#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbsim/config.hpp"
#include "hbsim/simulation.hpp"
#include "hbsim/statistics.hpp"

namespace hbsim {

struct SweepOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Keep every RunOutput in the result (needed to write per-run files).
  bool keep_outputs = false;
};

struct SweepResult {
  ExperimentConfig config;
  std::optional<SweepSummary> summary;  // absent when a run failed
  std::string error;
  std::vector<RunOutput> outputs;
};

/// Cartesian product nodes x rates x protocols over `base`, in that nesting
/// order. Subscriptions fall back to round(sqrt(n)) per size unless `base`
/// fixes them.
std::vector<ExperimentConfig> make_grid(const ExperimentConfig& base,
                                        std::span<const std::uint32_t> nodes,
                                        std::span<const double> rates,
                                        std::span<const ProtocolKind> protocols);

/**
 * Executes every run of every config, possibly on several threads, then
 * aggregates per config. Results are returned in input order and do not
 * depend on scheduling. A failing run only voids its own config's summary.
 */
std::vector<SweepResult> run_sweep(std::span<const ExperimentConfig> configs,
                                   const SweepOptions& options = {});

}  // namespace hbsim
