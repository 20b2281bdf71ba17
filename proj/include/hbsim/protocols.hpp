#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hbsim/datacenter.hpp"

namespace hbsim {

enum class ProtocolKind { central, hierarchical, simple_p2p, transitive_p2p };

std::string_view to_string(ProtocolKind kind) noexcept;
std::optional<ProtocolKind> parse_protocol_kind(std::string_view text) noexcept;

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::simple_p2p;
  /// Maximum age (s) of cached information that may still be relayed.
  double staleness_threshold = 1.0;
  std::uint32_t provider_count = 1;    // central
  std::uint32_t hierarchy_levels = 2;  // hierarchical
  /// Requests a provider accepts per whole simulation second.
  std::optional<std::uint32_t> max_requests_per_second;
};

struct Observation {
  bool alive = true;
  SimTime observed_at = 0.0;
};

/**
 * Referral state for the centralised architectures.
 *
 * Central: providers are node ids 0 .. provider_count - 1 and requester r
 * asks provider r mod provider_count.
 *
 * Hierarchical: with fan-out f (smallest f with f^levels >= n), the group
 * at level l containing node x is the id block of width f^(l+1) starting
 * at floor(x / f^(l+1)) * f^(l+1); its aggregator is that first id. Node 0
 * is the root. Each aggregator keeps a cache of every observation that
 * passes through it.
 */
class GlobalView {
 public:
  struct CacheSlot {
    bool alive = true;
    SimTime observed_at = 0.0;
  };

  struct ProviderState {
    std::unordered_map<NodeId, CacheSlot> cache;
    std::int64_t counter_second = -1;
    std::uint32_t counter = 0;
  };

  /// Requires cfg.kind to be central or hierarchical.
  GlobalView(std::uint32_t n, const ProtocolConfig& cfg);

  ProtocolKind kind() const noexcept { return kind_; }
  std::uint32_t size() const noexcept { return n_; }

  // central
  std::span<const NodeId> providers() const noexcept { return providers_; }
  NodeId provider_for(NodeId requester) const;

  // hierarchical
  std::uint32_t fan_out() const noexcept { return fan_out_; }
  /// Index of the topmost level (whose single group spans all nodes).
  std::uint32_t top_level() const noexcept { return top_level_; }
  NodeId root() const noexcept { return 0; }
  /// Aggregator of the level-`level` group containing `node`.
  NodeId aggregator(NodeId node, std::uint32_t level) const;
  /// First id past the level-`level` group led by `aggregator`.
  NodeId group_end(NodeId aggregator, std::uint32_t level) const;
  bool in_group(NodeId aggregator, std::uint32_t level, NodeId node) const;
  std::optional<NodeId> parent(NodeId node) const;
  /// Distinct level-0 aggregators in ascending id order.
  std::vector<NodeId> leaf_aggregators() const;

  struct Hop {
    NodeId aggregator;
    std::uint32_t level;
  };
  /// Aggregator hops a query for `target` visits when issued by
  /// `requester`, starting with the requester's leaf aggregator and ending
  /// at the leaf aggregator of `target`. Consecutive hops on the same node
  /// are merged.
  std::vector<Hop> route(NodeId requester, NodeId target) const;

  ProviderState& state(NodeId provider) { return state_[provider]; }
  const ProviderState* find_state(NodeId provider) const;

 private:
  std::uint64_t block(std::uint32_t level) const;

  ProtocolKind kind_;
  std::uint32_t n_;
  std::vector<NodeId> providers_;
  std::uint32_t fan_out_ = 1;
  std::uint32_t top_level_ = 0;
  std::vector<std::uint64_t> blocks_;  // f^(l+1) per level
  std::unordered_map<NodeId, ProviderState> state_;
};

/// One requester -> target heartbeat with traffic recorded: the request
/// always counts, the response only when the target is alive. A node
/// observing itself sends nothing. The caller's cache is not touched.
Observation observe(DataCenter& dc, NodeId requester, NodeId target,
                    SimTime now);

/// observe() followed by apply_observation on the requester's entry.
Observation direct_poll(DataCenter& dc, NodeId requester, NodeId target,
                        SimTime now);

void simple_poll(DataCenter& dc, NodeId requester, SimTime now);

/// Polls stale targets in ascending id order; alive responders piggyback
/// every fresh entry of their own cache, which the requester keeps when it
/// subscribes to that target.
void transitive_poll(DataCenter& dc, NodeId requester,
                     const ProtocolConfig& cfg, SimTime now);

/// `provider` answers `requester`'s query for `targets`, refreshing stale
/// cache entries by direct polls first. nullopt means the request was
/// refused (cap reached) or the provider is dead; the request message is
/// counted either way. A provider serving itself uses no network traffic
/// and no cap.
std::optional<std::vector<Observation>> provider_serve(
    GlobalView& gv, NodeId provider, NodeId requester,
    std::span<const NodeId> targets, const ProtocolConfig& cfg, DataCenter& dc,
    SimTime now);

void central_poll(DataCenter& dc, NodeId requester, const ProtocolConfig& cfg,
                  GlobalView& gv, SimTime now);

void hierarchical_poll(DataCenter& dc, NodeId requester,
                       const ProtocolConfig& cfg, GlobalView& gv, SimTime now);

/// Refreshes `node`'s subscriptions with the configured architecture. Dead
/// nodes do nothing. `gv` may be null for the P2P kinds.
void poll_subscriptions(DataCenter& dc, NodeId node, const ProtocolConfig& cfg,
                        GlobalView* gv, SimTime now);

}  // namespace hbsim
