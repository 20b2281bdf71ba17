#include "hbsim/failure.hpp"

#include <cmath>

#include "hbsim/errors.hpp"

namespace hbsim {

std::string_view to_string(RepairPolicy policy) noexcept {
  return policy == RepairPolicy::toggle_repair ? "toggle_repair" : "no_repair";
}

std::optional<RepairPolicy> parse_repair_policy(std::string_view text) noexcept {
  if (text == "toggle_repair") return RepairPolicy::toggle_repair;
  if (text == "no_repair") return RepairPolicy::no_repair;
  return std::nullopt;
}

std::string_view to_string(FailureEffectKind kind) noexcept {
  switch (kind) {
    case FailureEffectKind::failed:
      return "failed";
    case FailureEffectKind::repaired:
      return "repaired";
    case FailureEffectKind::no_op:
      return "no_op";
  }
  return "unknown";
}

double mean_inter_failure_s(std::uint32_t n, double rate_pct_per_min) {
  if (n == 0 || !(rate_pct_per_min > 0.0)) {
    throw ParameterError("failure rate and node count must be positive");
  }
  return 60.0 / (double(n) * rate_pct_per_min / 100.0);
}

std::optional<GammaParams> gamma_params_for_rate(std::uint32_t n,
                                                 const FailureConfig& cfg) {
  if (!(cfg.rate_pct_per_min >= 0.0) || !std::isfinite(cfg.rate_pct_per_min)) {
    throw ParameterError("failure rate must be a non-negative number");
  }
  if (!(cfg.gamma_shape > 0.0)) {
    throw ParameterError("gamma shape must be positive");
  }
  if (cfg.rate_pct_per_min == 0.0) return std::nullopt;
  const double mean = mean_inter_failure_s(n, cfg.rate_pct_per_min);
  return GammaParams{cfg.gamma_shape, mean / cfg.gamma_shape};
}

FailureEffect apply_failure(DataCenter& dc, RepairPolicy policy, NodeId node) {
  if (dc.alive(node)) {
    dc.set_liveness(node, false);
    return {FailureEffectKind::failed, node};
  }
  if (policy == RepairPolicy::toggle_repair) {
    dc.set_liveness(node, true);
    return {FailureEffectKind::repaired, node};
  }
  return {FailureEffectKind::no_op, node};
}

FailureEffect fire_failure(DataCenter& dc, const FailureConfig& cfg,
                           RngStream& failure_stream) {
  const auto node = static_cast<NodeId>(failure_stream.draw_index(dc.size()));
  return apply_failure(dc, cfg.repair_policy, node);
}

double draw_failure_delay(const GammaParams& params,
                          RngStream& failure_stream) {
  return failure_stream.draw_gamma(params.shape, params.scale);
}

}  // namespace hbsim
