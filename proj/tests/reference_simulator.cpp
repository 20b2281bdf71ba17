#include "reference_simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include "hbsim/rng.hpp"

namespace hbsim::testing {

namespace {

struct Belief {
  std::uint32_t target;
  bool alive;
  double at;
};

struct PendingEvent {
  double t;
  std::uint64_t seq;
  int kind;  // 0 probe, 1 update, 2 failure
  std::uint32_t node;
};

}  // namespace

ReferenceRun reference_run(const ExperimentConfig& cfg, std::uint32_t run_index) {
  const bool transitive = cfg.protocol.kind == ProtocolKind::transitive_p2p;
  if (!transitive && cfg.protocol.kind != ProtocolKind::simple_p2p) {
    throw std::invalid_argument("reference simulator only models P2P");
  }
  const std::uint32_t n = cfg.nodes;
  const std::uint32_t k = cfg.subscriptions_per_node();
  const double thr = cfg.protocol.staleness_threshold;

  RngStream topo("topology", derive_seed(cfg.seed, run_index, "topology"));
  RngStream upd("update", derive_seed(cfg.seed, run_index, "update"));
  RngStream fail("failure", derive_seed(cfg.seed, run_index, "failure"));

  ReferenceRun out;
  std::vector<bool> alive(n, true);
  std::vector<std::vector<Belief>> belief(n);
  for (std::uint32_t self = 0; self < n; ++self) {
    std::vector<std::uint32_t> picks;
    for (std::uint32_t j = n - 1 - k; j < n - 1; ++j) {
      std::uint32_t t = static_cast<std::uint32_t>(topo.draw_index(j + 1ULL));
      if (std::find(picks.begin(), picks.end(), t) != picks.end()) t = j;
      picks.push_back(t);
    }
    std::sort(picks.begin(), picks.end());
    std::vector<std::uint32_t> targets;
    for (auto p : picks) targets.push_back(p >= self ? p + 1 : p);
    out.subscriptions.push_back(targets);
    for (auto t : targets) belief[self].push_back({t, true, 0.0});
  }

  std::vector<PendingEvent> pending;
  std::uint64_t seq = 0;
  pending.push_back({cfg.probe_start_s, seq++, 0, 0});
  for (std::uint32_t id = 0; id < n; ++id) {
    pending.push_back(
        {upd.draw_uniform(cfg.update_min_s, cfg.update_max_s), seq++, 1, id});
  }
  const double rate = cfg.failure.rate_pct_per_min;
  const double shape = cfg.failure.gamma_shape;
  const double scale = rate > 0 ? 60.0 / (n * rate / 100.0) / shape : 0.0;
  if (rate > 0) pending.push_back({fail.draw_gamma(shape, scale), seq++, 2, 0});

  auto apply = [](Belief& b, bool a, double at) {
    if (at >= b.at) {
      b.alive = a;
      b.at = at;
    }
  };

  for (;;) {
    auto it = std::min_element(pending.begin(), pending.end(),
                               [](const PendingEvent& a, const PendingEvent& b) {
                                 return a.t < b.t || (a.t == b.t && a.seq < b.seq);
                               });
    if (it == pending.end() || it->t > cfg.duration_s) break;
    const PendingEvent ev = *it;
    pending.erase(it);
    const double now = ev.t;

    if (ev.kind == 0) {
      std::uint32_t wrong = 0;
      for (std::uint32_t v = 0; v < n; ++v) {
        bool bad = false;
        for (const Belief& b : belief[v]) bad = bad || b.alive != alive[b.target];
        wrong += bad ? 1 : 0;
      }
      out.probe_times.push_back(now);
      out.probe_counts.push_back(wrong);
      const double next =
          cfg.probe_start_s + double(out.probe_times.size()) * cfg.probe_interval_s;
      if (next <= cfg.duration_s) pending.push_back({next, seq++, 0, 0});
    } else if (ev.kind == 1) {
      const std::uint32_t v = ev.node;
      if (alive[v]) {
        for (Belief& b : belief[v]) {
          if (transitive && now - b.at <= thr) continue;
          const bool a = alive[b.target];
          apply(b, a, now);
          if (!transitive || !a) continue;
          for (const Belief& relayed : belief[b.target]) {
            if (now - relayed.at > thr) continue;
            for (Belief& mine : belief[v]) {
              if (mine.target == relayed.target) {
                apply(mine, relayed.alive, relayed.at);
              }
            }
          }
        }
      }
      pending.push_back(
          {now + upd.draw_uniform(cfg.update_min_s, cfg.update_max_s), seq++, 1,
           v});
    } else {
      ++out.failure_events;
      const auto victim = static_cast<std::uint32_t>(fail.draw_index(n));
      if (alive[victim]) {
        alive[victim] = false;
      } else if (cfg.failure.repair_policy == RepairPolicy::toggle_repair) {
        alive[victim] = true;
      }
      pending.push_back({now + fail.draw_gamma(shape, scale), seq++, 2, 0});
    }
  }
  return out;
}

}  // namespace hbsim::testing
