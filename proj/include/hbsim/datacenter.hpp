#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hbsim/event_queue.hpp"
#include "hbsim/load_log.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

/// A node's cached belief about one subscribed target. `observed_at` is
/// when the underlying observation was made, not when it arrived.
struct SubscriptionEntry {
  NodeId target = 0;
  bool believed_alive = true;
  SimTime observed_at = 0.0;
};

/// Back-reference from a target to one entry that watches it.
struct SubscriberRef {
  NodeId node = 0;
  std::uint32_t slot = 0;  // index into that node's subscriptions
};

/// round(sqrt(n)), capped at n - 1.
std::uint32_t default_subscriptions(std::uint32_t n) noexcept;

/**
 * Ground truth plus every node's subscription cache on a one-hop network.
 *
 * Subscriptions of each node are sorted by target id. The number of
 * inconsistent nodes is maintained incrementally: every mutation of ground
 * truth or of a cache entry updates a per-node count of wrong entries.
 */
class DataCenter {
 public:
  /// Every node starts alive with k distinct targets drawn uniformly
  /// without replacement (Floyd's algorithm over the other n - 1 ids) and
  /// caches that believe alive at t = 0.
  DataCenter(std::uint32_t n, std::uint32_t k, RngStream& topology,
             double load_window_s = 10.0);

  /// Explicit topology: `targets[v]` lists node v's subscriptions. Every
  /// list must have the same length, distinct entries and no self-loop.
  explicit DataCenter(const std::vector<std::vector<NodeId>>& targets,
                      double load_window_s = 10.0);

  std::uint32_t size() const noexcept { return n_; }
  std::uint32_t subscriptions_per_node() const noexcept { return k_; }

  bool alive(NodeId id) const { return alive_[checked(id)] != 0; }
  /// Changes ground truth only; caches are left as they are.
  void set_liveness(NodeId id, bool alive);

  std::span<const SubscriptionEntry> subscriptions(NodeId id) const {
    return subs_[checked(id)];
  }
  std::span<const SubscriberRef> subscribers(NodeId id) const {
    return subscribers_[checked(id)];
  }
  /// Slot of `target` in `observer`'s subscription list, if subscribed.
  std::optional<std::uint32_t> find_subscription(NodeId observer,
                                                 NodeId target) const;

  /// Applies the observation when it is at least as recent as the cached
  /// one. Returns whether the entry changed hands. Throws ContractViolation
  /// when `observer` does not subscribe to `target`.
  bool apply_observation(NodeId observer, NodeId target, bool alive,
                         SimTime observed_at);
  /// Same as apply_observation for a known slot.
  bool apply_at(NodeId observer, std::uint32_t slot, bool alive,
                SimTime observed_at);

  bool is_inconsistent(NodeId id) const { return wrong_[checked(id)] > 0; }
  std::uint32_t count_inconsistent_nodes() const noexcept {
    return inconsistent_nodes_;
  }

  void record_access(Component c, SimTime t, std::uint64_t messages,
                     std::uint64_t payload_entries = 0) {
    load_.record(c, t, messages, payload_entries);
  }
  /// One message: an access on the sender's link and one on the switch.
  void send_message(NodeId from, SimTime t, std::uint64_t payload_entries = 0) {
    load_.record(Component::link(from), t, 1, payload_entries);
    load_.record(Component::network_switch(), t, 1, payload_entries);
  }
  const LoadLog& load() const noexcept { return load_; }

 private:
  NodeId checked(NodeId id) const;
  void index_subscribers();
  void set_entry_consistency(NodeId owner, bool was_ok, bool now_ok);

  std::uint32_t n_;
  std::uint32_t k_;
  std::vector<char> alive_;
  std::vector<std::vector<SubscriptionEntry>> subs_;
  std::vector<std::vector<SubscriberRef>> subscribers_;
  std::vector<std::uint32_t> wrong_;
  std::uint32_t inconsistent_nodes_ = 0;
  LoadLog load_;
};

}  // namespace hbsim
