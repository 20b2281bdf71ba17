#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "hbsim/config.hpp"
#include "hbsim/datacenter.hpp"
#include "hbsim/event_queue.hpp"
#include "hbsim/failure.hpp"
#include "hbsim/protocols.hpp"
#include "hbsim/rng.hpp"
#include "hbsim/tally.hpp"

namespace hbsim {

// Names of the per-run random streams; seeds come from derive_seed.
inline constexpr std::string_view kTopologyStream = "topology";
inline constexpr std::string_view kUpdateStream = "update";
inline constexpr std::string_view kFailureStream = "failure";

enum class ActionKind : std::uint8_t { probe, update, failure };

struct SimAction {
  static constexpr NodeId kRandomNode = std::numeric_limits<NodeId>::max();

  ActionKind kind = ActionKind::probe;
  /// Updating node, or the scripted victim of a failure (kRandomNode for a
  /// draw from the failure stream).
  NodeId node = kRandomNode;

  friend bool operator==(const SimAction&, const SimAction&) = default;
};

struct ProbeRecord {
  std::uint32_t run = 0;
  SimTime t = 0.0;
  std::uint32_t inconsistent_nodes = 0;
};

struct FailureRecord {
  std::uint32_t run = 0;
  SimTime t = 0.0;
  NodeId node = 0;
  FailureEffectKind effect = FailureEffectKind::no_op;
  std::uint32_t inconsistent_nodes = 0;  // right after the event
};

struct RunSummary {
  double mean_inconsistent = 0.0;
  std::uint32_t max_inconsistent = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t total_payload_entries = 0;
  std::uint64_t failure_events = 0;
  std::uint64_t update_events = 0;
};

struct LoadRecord {
  std::uint32_t run = 0;
  SimTime window_start = 0.0;
  Component component = Component::network_switch();
  AccessCounts counts;
};

struct RunOutput {
  std::uint32_t run_index = 0;
  std::vector<ProbeRecord> probes;
  std::vector<FailureRecord> failures;
  std::vector<LoadRecord> load;
  RunSummary summary;
};

/**
 * State of one run: the data centre, the optional global view and the event
 * queue, driven by probe, update and failure events.
 *
 * Construction schedules, in this order: the first probe at probe_start_s,
 * one update per node (ascending id) after a uniform delay, and the first
 * failure when the rate is positive. Equal-time events fire in insertion
 * order.
 */
class Simulation {
 public:
  Simulation(const ExperimentConfig& cfg, std::uint32_t run_index);

  /// Schedules a failure event hitting `node` at time `at`. Scripted events
  /// draw nothing from the failure stream and do not reschedule.
  void inject_failure(SimTime at, NodeId node);

  /// Processes every event up to `t` (capped at the configured duration).
  void run_until(SimTime t);
  void run() { run_until(cfg_.duration_s); }

  SimTime now() const noexcept { return queue_.now(); }
  const ExperimentConfig& config() const noexcept { return cfg_; }
  const DataCenter& datacenter() const noexcept { return dc_; }
  DataCenter& datacenter() noexcept { return dc_; }
  const GlobalView* global_view() const noexcept { return gv_.get(); }
  const std::vector<ProbeRecord>& probes() const noexcept { return probes_; }
  const std::vector<FailureRecord>& failures() const noexcept {
    return failures_;
  }
  std::uint64_t update_events() const noexcept { return update_events_; }

  /// Called with every event just before it is handled.
  void set_trace(std::function<void(const Event<SimAction>&)> trace) {
    trace_ = std::move(trace);
  }

  /// Collects the output tables. Call after run().
  RunOutput output() const;

 private:
  void dispatch(const Event<SimAction>& ev);
  void on_probe(SimTime t);
  void on_update(NodeId node, SimTime t);
  void on_failure(NodeId scripted, SimTime t);

  ExperimentConfig cfg_;
  std::uint32_t run_index_;
  RngStream topology_;
  RngStream updates_;
  RngStream failure_stream_;
  DataCenter dc_;
  std::unique_ptr<GlobalView> gv_;
  std::optional<GammaParams> failure_params_;
  EventQueue<SimAction> queue_;

  std::vector<ProbeRecord> probes_;
  std::vector<FailureRecord> failures_;
  Tally probe_tally_;
  std::uint64_t failure_events_ = 0;
  std::uint64_t update_events_ = 0;
  std::function<void(const Event<SimAction>&)> trace_;
};

/// Runs `run_index` of `cfg` to completion.
RunOutput run_one(const ExperimentConfig& cfg, std::uint32_t run_index);

}  // namespace hbsim
