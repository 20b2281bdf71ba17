#pragma once

#include <span>
#include <string>
#include <vector>

#include "hbsim/simulation.hpp"
#include "hbsim/statistics.hpp"

namespace hbsim {

// CSV renderers. Header row, comma separated, '.' decimals, LF endings.

/// run,t,inconsistent_nodes
std::string probes_csv(std::span<const RunOutput> outputs);
/// run,t,node,effect,inconsistent_nodes_at_event
std::string failures_csv(std::span<const RunOutput> outputs);
/// run,window_start,component,messages,payload_entries; component is
/// `switch` or `link:<node>`; only non-zero rows appear.
std::string load_csv(std::span<const RunOutput> outputs);
/// nodes,rate_pct_per_min,protocol,runs,mean,sd,min,max,ci95_halfwidth,
/// normalized_mean; an undefined CI is left empty.
std::string summary_csv(std::span<const SweepSummary> summaries);

std::string component_label(Component c);

/// Writes probes.csv, failures.csv and load.csv (and summary.csv when
/// `summaries` is non-empty) into `dir`, creating it if needed.
void write_outputs(std::span<const RunOutput> outputs,
                   std::span<const SweepSummary> summaries,
                   const std::string& dir);

/// Directory name used for one configuration inside a sweep output.
std::string config_label(std::uint32_t nodes, double rate_pct_per_min,
                         ProtocolKind protocol);

struct PlotTables {
  /// nodes,rate_pct_per_min,protocol,mean,ci95_halfwidth,lower,upper
  std::string mean_ci;
  /// rate_pct_per_min,nodes,protocol,normalized_mean (grouped by rate)
  std::string normalized;
  /// nodes,rate_pct_per_min,protocol,run,t,inconsistent_nodes
  std::string recovery;
};

/// `series[i]` holds the probe records behind `summaries[i]`; it may be
/// shorter than `summaries`, missing entries contribute no recovery rows.
PlotTables emit_plot_data(std::span<const SweepSummary> summaries,
                          std::span<const std::vector<ProbeRecord>> series);

/// Writes plot_mean_ci.csv, plot_normalized.csv and plot_recovery.csv.
void write_plot_data(const PlotTables& tables, const std::string& dir);

std::vector<SweepSummary> read_summary_csv(const std::string& text);
std::vector<ProbeRecord> read_probes_csv(const std::string& text);

}  // namespace hbsim
