#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hbsim/failure.hpp"
#include "hbsim/protocols.hpp"

namespace hbsim {

struct ExperimentConfig {
  std::uint32_t nodes = 0;
  /// Unset means round(sqrt(nodes)).
  std::optional<std::uint32_t> subscriptions;
  ProtocolConfig protocol;
  FailureConfig failure;
  double duration_s = 3600.0;
  std::uint32_t runs = 10;
  std::uint64_t seed = 1;
  double probe_start_s = 2.0;
  double probe_interval_s = 1.0;
  double update_min_s = 0.8;
  double update_max_s = 1.2;
  double load_window_s = 10.0;
  std::string output_dir = "results";

  std::uint32_t subscriptions_per_node() const noexcept;

  /// Throws ConfigError (line 0) on any violated invariant.
  void validate() const;

  /// Canonical one-line description of every simulation-relevant field.
  std::string fingerprint() const;
};

/**
 * Parses `key=value` lines. Blank lines and `#` comments are ignored. Every
 * key is optional except `nodes`; unknown or repeated keys are errors. The
 * result is defaulted and validated; errors name the offending line.
 */
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config_file(const std::string& path);

/// Renders a config in the format accepted by parse_config.
std::string to_config_text(const ExperimentConfig& cfg);

}  // namespace hbsim
