#include "hbsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "hbsim/errors.hpp"

namespace hbsim {

std::string_view to_string(ProtocolKind kind) noexcept {
  switch (kind) {
    case ProtocolKind::central:
      return "central";
    case ProtocolKind::hierarchical:
      return "hierarchical";
    case ProtocolKind::simple_p2p:
      return "simple_p2p";
    case ProtocolKind::transitive_p2p:
      return "transitive_p2p";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view text) noexcept {
  for (auto kind : {ProtocolKind::central, ProtocolKind::hierarchical,
                    ProtocolKind::simple_p2p, ProtocolKind::transitive_p2p}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// GlobalView

GlobalView::GlobalView(std::uint32_t n, const ProtocolConfig& cfg)
    : kind_(cfg.kind), n_(n) {
  if (cfg.kind == ProtocolKind::central) {
    if (cfg.provider_count == 0 || cfg.provider_count > n) {
      throw ConfigError(0, "provider_count must be in [1, n]");
    }
    for (NodeId p = 0; p < cfg.provider_count; ++p) providers_.push_back(p);
  } else if (cfg.kind == ProtocolKind::hierarchical) {
    if (cfg.hierarchy_levels < 2) {
      throw ConfigError(0, "hierarchy_levels must be at least 2");
    }
    // Smallest f with f^levels >= n.
    auto covers = [&](std::uint64_t f) {
      std::uint64_t p = 1;
      for (std::uint32_t i = 0; i < cfg.hierarchy_levels; ++i) {
        p *= f;
        if (p >= n) return true;
      }
      return p >= n;
    };
    std::uint64_t f = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(
               std::floor(std::pow(double(n), 1.0 / cfg.hierarchy_levels))));
    while (f > 1 && covers(f - 1)) --f;
    while (!covers(f)) ++f;
    fan_out_ = static_cast<std::uint32_t>(f);
    if (fan_out_ < 2) fan_out_ = 2;  // n == 1 still gets a well-formed tree
    std::uint64_t b = fan_out_;
    blocks_.push_back(b);
    while (b < n) {
      b *= fan_out_;
      blocks_.push_back(b);
    }
    top_level_ = static_cast<std::uint32_t>(blocks_.size() - 1);
  } else {
    throw ConfigError(0, "global view is only used by central and "
                         "hierarchical protocols");
  }
}

NodeId GlobalView::provider_for(NodeId requester) const {
  return providers_.at(requester % providers_.size());
}

std::uint64_t GlobalView::block(std::uint32_t level) const {
  return level < blocks_.size() ? blocks_[level] : blocks_.back();
}

NodeId GlobalView::aggregator(NodeId node, std::uint32_t level) const {
  const std::uint64_t b = block(level);
  return static_cast<NodeId>((node / b) * b);
}

NodeId GlobalView::group_end(NodeId aggregator, std::uint32_t level) const {
  return static_cast<NodeId>(
      std::min<std::uint64_t>(std::uint64_t(aggregator) + block(level), n_));
}

bool GlobalView::in_group(NodeId aggregator, std::uint32_t level,
                          NodeId node) const {
  return node >= aggregator && node < group_end(aggregator, level);
}

std::optional<NodeId> GlobalView::parent(NodeId node) const {
  for (std::uint32_t level = 0; level <= top_level_; ++level) {
    const NodeId a = aggregator(node, level);
    if (a != node) return a;
  }
  return std::nullopt;
}

std::vector<NodeId> GlobalView::leaf_aggregators() const {
  std::vector<NodeId> out;
  for (std::uint64_t a = 0; a < n_; a += block(0)) {
    out.push_back(static_cast<NodeId>(a));
  }
  return out;
}

std::vector<GlobalView::Hop> GlobalView::route(NodeId requester,
                                               NodeId target) const {
  std::vector<Hop> hops{{aggregator(requester, 0), 0}};
  for (;;) {
    const Hop cur = hops.back();
    Hop next{};
    if (cur.level == 0 && in_group(cur.aggregator, 0, target)) break;
    if (in_group(cur.aggregator, cur.level, target)) {
      next = {aggregator(target, cur.level - 1), cur.level - 1};
    } else {
      next = {aggregator(cur.aggregator, cur.level + 1), cur.level + 1};
    }
    if (next.aggregator == cur.aggregator) {
      hops.back() = next;
    } else {
      hops.push_back(next);
    }
  }
  return hops;
}

const GlobalView::ProviderState* GlobalView::find_state(NodeId provider) const {
  auto it = state_.find(provider);
  return it == state_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Polling

namespace {

bool fresh(SimTime observed_at, SimTime now, double threshold) {
  return now - observed_at <= threshold;
}

// Counts an accepted request against the provider's per-second cap.
bool admit(GlobalView::ProviderState& st, const ProtocolConfig& cfg,
           SimTime now) {
  const auto second = static_cast<std::int64_t>(std::floor(now));
  if (st.counter_second != second) {
    st.counter_second = second;
    st.counter = 0;
  }
  if (cfg.max_requests_per_second && st.counter >= *cfg.max_requests_per_second) {
    return false;
  }
  ++st.counter;
  return true;
}

}  // namespace

Observation observe(DataCenter& dc, NodeId requester, NodeId target,
                    SimTime now) {
  if (requester == target) return {dc.alive(target), now};
  dc.send_message(requester, now);
  const bool alive = dc.alive(target);
  if (alive) dc.send_message(target, now);
  return {alive, now};
}

Observation direct_poll(DataCenter& dc, NodeId requester, NodeId target,
                        SimTime now) {
  const auto slot = dc.find_subscription(requester, target);
  if (!slot) {
    throw ContractViolation("direct poll of an unsubscribed target");
  }
  const Observation obs = observe(dc, requester, target, now);
  dc.apply_at(requester, *slot, obs.alive, obs.observed_at);
  return obs;
}

void simple_poll(DataCenter& dc, NodeId requester, SimTime now) {
  const auto subs = dc.subscriptions(requester);
  for (std::uint32_t slot = 0; slot < subs.size(); ++slot) {
    const Observation obs = observe(dc, requester, subs[slot].target, now);
    dc.apply_at(requester, slot, obs.alive, obs.observed_at);
  }
}

void transitive_poll(DataCenter& dc, NodeId requester,
                     const ProtocolConfig& cfg, SimTime now) {
  const double thr = cfg.staleness_threshold;
  const auto mine = dc.subscriptions(requester);
  for (std::uint32_t slot = 0; slot < mine.size(); ++slot) {
    if (fresh(mine[slot].observed_at, now, thr)) continue;
    const NodeId target = mine[slot].target;

    dc.send_message(requester, now);
    const bool alive = dc.alive(target);
    dc.apply_at(requester, slot, alive, now);
    if (!alive) continue;

    const auto theirs = dc.subscriptions(target);
    std::uint64_t payload = 0;
    for (const auto& e : theirs) {
      if (fresh(e.observed_at, now, thr)) ++payload;
    }
    dc.send_message(target, now, payload);

    // Both lists are sorted by target id.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < mine.size() && j < theirs.size()) {
      if (mine[i].target < theirs[j].target) {
        ++i;
      } else if (theirs[j].target < mine[i].target) {
        ++j;
      } else {
        const SubscriptionEntry relayed = theirs[j];
        if (fresh(relayed.observed_at, now, thr)) {
          dc.apply_at(requester, static_cast<std::uint32_t>(i),
                      relayed.believed_alive, relayed.observed_at);
        }
        ++i;
        ++j;
      }
    }
  }
}

std::optional<std::vector<Observation>> provider_serve(
    GlobalView& gv, NodeId provider, NodeId requester,
    std::span<const NodeId> targets, const ProtocolConfig& cfg, DataCenter& dc,
    SimTime now) {
  const bool local = provider == requester;
  if (!local) dc.send_message(requester, now);
  if (!dc.alive(provider)) return std::nullopt;
  auto& st = gv.state(provider);
  if (!local && !admit(st, cfg, now)) return std::nullopt;

  std::vector<Observation> out;
  out.reserve(targets.size());
  for (NodeId t : targets) {
    auto it = st.cache.find(t);
    if (it == st.cache.end() ||
        !fresh(it->second.observed_at, now, cfg.staleness_threshold)) {
      const Observation obs = observe(dc, provider, t, now);
      it = st.cache.insert_or_assign(t, GlobalView::CacheSlot{obs.alive,
                                                              obs.observed_at})
               .first;
    }
    out.push_back({it->second.alive, it->second.observed_at});
  }
  if (!local) dc.send_message(provider, now, targets.size());
  return out;
}

void central_poll(DataCenter& dc, NodeId requester, const ProtocolConfig& cfg,
                  GlobalView& gv, SimTime now) {
  const auto subs = dc.subscriptions(requester);
  std::vector<NodeId> targets;
  targets.reserve(subs.size());
  for (const auto& e : subs) targets.push_back(e.target);

  const NodeId provider = gv.provider_for(requester);
  const auto served =
      provider_serve(gv, provider, requester, targets, cfg, dc, now);
  if (!served) {
    simple_poll(dc, requester, now);
    return;
  }
  for (std::uint32_t slot = 0; slot < served->size(); ++slot) {
    const Observation& obs = (*served)[slot];
    dc.apply_at(requester, slot, obs.alive, obs.observed_at);
  }
}

namespace {

using MaybeObservation = std::optional<Observation>;

class HierarchyWalk {
 public:
  HierarchyWalk(DataCenter& dc, GlobalView& gv, const ProtocolConfig& cfg,
                SimTime now)
      : dc_(dc), gv_(gv), cfg_(cfg), now_(now) {}

  // Answers `targets` at `agg`, acting as the level-`level` aggregator.
  std::vector<MaybeObservation> serve(NodeId agg, std::uint32_t level,
                                      std::span<const NodeId> targets) {
    std::vector<MaybeObservation> result(targets.size());
    std::map<std::pair<NodeId, std::uint32_t>, std::vector<std::size_t>> hops;
    auto& cache = gv_.state(agg).cache;

    for (std::size_t i = 0; i < targets.size(); ++i) {
      const NodeId t = targets[i];
      if (auto it = cache.find(t);
          it != cache.end() &&
          fresh(it->second.observed_at, now_, cfg_.staleness_threshold)) {
        result[i] = Observation{it->second.alive, it->second.observed_at};
      } else if (level == 0 && gv_.in_group(agg, 0, t)) {
        const Observation obs = observe(dc_, agg, t, now_);
        cache.insert_or_assign(t, GlobalView::CacheSlot{obs.alive, obs.observed_at});
        result[i] = obs;
      } else if (gv_.in_group(agg, level, t)) {
        hops[{gv_.aggregator(t, level - 1), level - 1}].push_back(i);
      } else {
        hops[{gv_.aggregator(agg, level + 1), level + 1}].push_back(i);
      }
    }

    for (const auto& [hop, indices] : hops) {
      std::vector<NodeId> sub;
      sub.reserve(indices.size());
      for (std::size_t i : indices) sub.push_back(targets[i]);
      const auto answers = hop.first == agg
                               ? serve(agg, hop.second, sub)
                               : request(agg, hop.first, hop.second, sub);
      for (std::size_t j = 0; j < indices.size(); ++j) {
        if (!answers[j]) continue;
        cache.insert_or_assign(
            sub[j], GlobalView::CacheSlot{answers[j]->alive,
                                          answers[j]->observed_at});
        result[indices[j]] = answers[j];
      }
    }
    return result;
  }

  // `from` sends one request to aggregator `to` and gets one response.
  std::vector<MaybeObservation> request(NodeId from, NodeId to,
                                        std::uint32_t level,
                                        std::span<const NodeId> targets) {
    dc_.send_message(from, now_);
    if (!dc_.alive(to) || !admit(gv_.state(to), cfg_, now_)) {
      return std::vector<MaybeObservation>(targets.size());
    }
    auto answers = serve(to, level, targets);
    const auto returned = static_cast<std::uint64_t>(
        std::count_if(answers.begin(), answers.end(),
                      [](const MaybeObservation& o) { return o.has_value(); }));
    dc_.send_message(to, now_, returned);
    return answers;
  }

 private:
  DataCenter& dc_;
  GlobalView& gv_;
  const ProtocolConfig& cfg_;
  SimTime now_;
};

}  // namespace

void hierarchical_poll(DataCenter& dc, NodeId requester,
                       const ProtocolConfig& cfg, GlobalView& gv, SimTime now) {
  const auto subs = dc.subscriptions(requester);
  if (subs.empty()) return;
  std::vector<NodeId> targets;
  targets.reserve(subs.size());
  for (const auto& e : subs) targets.push_back(e.target);

  HierarchyWalk walk(dc, gv, cfg, now);
  const NodeId leaf = gv.aggregator(requester, 0);
  const auto answers = leaf == requester ? walk.serve(requester, 0, targets)
                                         : walk.request(requester, leaf, 0,
                                                        targets);
  for (std::uint32_t slot = 0; slot < answers.size(); ++slot) {
    if (answers[slot]) {
      dc.apply_at(requester, slot, answers[slot]->alive,
                  answers[slot]->observed_at);
    } else {
      const Observation obs = observe(dc, requester, targets[slot], now);
      dc.apply_at(requester, slot, obs.alive, obs.observed_at);
    }
  }
}

void poll_subscriptions(DataCenter& dc, NodeId node, const ProtocolConfig& cfg,
                        GlobalView* gv, SimTime now) {
  if (!dc.alive(node)) return;
  switch (cfg.kind) {
    case ProtocolKind::simple_p2p:
      simple_poll(dc, node, now);
      return;
    case ProtocolKind::transitive_p2p:
      transitive_poll(dc, node, cfg, now);
      return;
    case ProtocolKind::central:
    case ProtocolKind::hierarchical:
      if (gv == nullptr) {
        throw ContractViolation("centralised protocol polled without a "
                                "global view");
      }
      if (cfg.kind == ProtocolKind::central) {
        central_poll(dc, node, cfg, *gv, now);
      } else {
        hierarchical_poll(dc, node, cfg, *gv, now);
      }
      return;
  }
}

}  // namespace hbsim
