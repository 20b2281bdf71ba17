#include "hbsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbsim/errors.hpp"

namespace hbsim {

namespace {

const ExperimentConfig& validated(const ExperimentConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& cfg, std::uint32_t run_index)
    : cfg_(validated(cfg)),
      run_index_(run_index),
      topology_(std::string(kTopologyStream),
                derive_seed(cfg.seed, run_index, kTopologyStream)),
      updates_(std::string(kUpdateStream),
               derive_seed(cfg.seed, run_index, kUpdateStream)),
      failure_stream_(std::string(kFailureStream),
                      derive_seed(cfg.seed, run_index, kFailureStream)),
      dc_(cfg.nodes, cfg.subscriptions_per_node(), topology_,
          cfg.load_window_s),
      failure_params_(gamma_params_for_rate(cfg.nodes, cfg.failure)) {
  if (cfg_.protocol.kind == ProtocolKind::central ||
      cfg_.protocol.kind == ProtocolKind::hierarchical) {
    gv_ = std::make_unique<GlobalView>(cfg_.nodes, cfg_.protocol);
  }

  queue_.schedule_at(cfg_.probe_start_s, SimAction{ActionKind::probe});
  for (NodeId id = 0; id < cfg_.nodes; ++id) {
    queue_.schedule(updates_.draw_uniform(cfg_.update_min_s, cfg_.update_max_s),
                    SimAction{ActionKind::update, id});
  }
  if (failure_params_) {
    queue_.schedule(draw_failure_delay(*failure_params_, failure_stream_),
                    SimAction{ActionKind::failure});
  }
}

void Simulation::inject_failure(SimTime at, NodeId node) {
  if (node >= cfg_.nodes) {
    throw ContractViolation("scripted failure of unknown node " +
                            std::to_string(node));
  }
  queue_.schedule_at(at, SimAction{ActionKind::failure, node});
}

void Simulation::run_until(SimTime t) {
  queue_.run(std::min(t, cfg_.duration_s),
             [this](const Event<SimAction>& ev) { dispatch(ev); });
}

void Simulation::dispatch(const Event<SimAction>& ev) {
  if (trace_) trace_(ev);
  switch (ev.action.kind) {
    case ActionKind::probe:
      on_probe(ev.fire_time);
      break;
    case ActionKind::update:
      on_update(ev.action.node, ev.fire_time);
      break;
    case ActionKind::failure:
      on_failure(ev.action.node, ev.fire_time);
      break;
  }
}

void Simulation::on_probe(SimTime t) {
  const std::uint32_t count = dc_.count_inconsistent_nodes();
  probes_.push_back(ProbeRecord{run_index_, t, count});
  probe_tally_.add(count);
  // Absolute times avoid drift from repeated addition.
  const SimTime next = cfg_.probe_start_s +
                       double(probes_.size()) * cfg_.probe_interval_s;
  if (next <= cfg_.duration_s) {
    queue_.schedule_at(next, SimAction{ActionKind::probe});
  }
}

void Simulation::on_update(NodeId node, SimTime t) {
  ++update_events_;
  poll_subscriptions(dc_, node, cfg_.protocol, gv_.get(), t);
  queue_.schedule(updates_.draw_uniform(cfg_.update_min_s, cfg_.update_max_s),
                  SimAction{ActionKind::update, node});
}

void Simulation::on_failure(NodeId scripted, SimTime t) {
  ++failure_events_;
  FailureEffect effect;
  if (scripted == SimAction::kRandomNode) {
    effect = fire_failure(dc_, cfg_.failure, failure_stream_);
    queue_.schedule(draw_failure_delay(*failure_params_, failure_stream_),
                    SimAction{ActionKind::failure});
  } else {
    effect = apply_failure(dc_, cfg_.failure.repair_policy, scripted);
  }
  failures_.push_back(FailureRecord{run_index_, t, effect.node, effect.kind,
                                    dc_.count_inconsistent_nodes()});
}

RunOutput Simulation::output() const {
  RunOutput out;
  out.run_index = run_index_;
  out.probes = probes_;
  out.failures = failures_;
  for (const LoadRow& row : dc_.load().rows()) {
    out.load.push_back(LoadRecord{
        run_index_, double(row.window) * dc_.load().window_width(),
        row.component, row.counts});
  }
  RunSummary& s = out.summary;
  if (probe_tally_.count() > 0) {
    const TallySummary t = probe_tally_.summary();
    s.mean_inconsistent = t.mean;
    s.max_inconsistent = static_cast<std::uint32_t>(t.max);
  }
  const AccessCounts sw = dc_.load().total(Component::network_switch());
  s.total_messages = sw.messages;
  s.total_payload_entries = sw.payload_entries;
  s.failure_events = failure_events_;
  s.update_events = update_events_;
  return out;
}

RunOutput run_one(const ExperimentConfig& cfg, std::uint32_t run_index) {
  Simulation sim(cfg, run_index);
  sim.run();
  return sim.output();
}

}  // namespace hbsim
