#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "hbsim/datacenter.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

enum class RepairPolicy {
  toggle_repair,  // picking a dead node revives it
  no_repair,      // dead nodes stay dead for the rest of the run
};

std::string_view to_string(RepairPolicy policy) noexcept;
std::optional<RepairPolicy> parse_repair_policy(std::string_view text) noexcept;

struct FailureConfig {
  double rate_pct_per_min = 0.0;  // mean % of nodes hit per minute
  double gamma_shape = 2.0;
  RepairPolicy repair_policy = RepairPolicy::toggle_repair;
};

struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;
  double mean() const noexcept { return shape * scale; }
};

/// Mean seconds between failure events: 60 / (n * rate / 100).
double mean_inter_failure_s(std::uint32_t n, double rate_pct_per_min);

/// Gamma inter-failure parameters whose mean hits the configured rate.
/// nullopt when the rate is zero (no failures are ever scheduled).
std::optional<GammaParams> gamma_params_for_rate(std::uint32_t n,
                                                 const FailureConfig& cfg);

enum class FailureEffectKind { failed, repaired, no_op };

std::string_view to_string(FailureEffectKind kind) noexcept;

struct FailureEffect {
  FailureEffectKind kind = FailureEffectKind::no_op;
  NodeId node = 0;
};

/// Applies a failure event to `node` under `policy`.
FailureEffect apply_failure(DataCenter& dc, RepairPolicy policy, NodeId node);

/// Picks a node uniformly from `failure_stream` and applies the event.
FailureEffect fire_failure(DataCenter& dc, const FailureConfig& cfg,
                           RngStream& failure_stream);

/// Delay until the next failure event.
double draw_failure_delay(const GammaParams& params, RngStream& failure_stream);

}  // namespace hbsim
