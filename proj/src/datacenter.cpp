#include "hbsim/datacenter.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "hbsim/errors.hpp"

namespace hbsim {

std::uint32_t default_subscriptions(std::uint32_t n) noexcept {
  if (n <= 1) return 0;
  const auto k = static_cast<std::uint32_t>(std::lround(std::sqrt(double(n))));
  return std::min(k, n - 1);
}

DataCenter::DataCenter(std::uint32_t n, std::uint32_t k, RngStream& topology,
                       double load_window_s)
    : n_(n),
      k_(k),
      alive_(n, 1),
      subs_(n),
      subscribers_(n),
      wrong_(n, 0),
      load_(n, load_window_s) {
  if (n == 0) {
    throw ConfigError(0, "data centre needs at least one node");
  }
  if (n > 0 && k > n - 1) {
    throw ConfigError(0, "subscriptions per node (" + std::to_string(k) +
                             ") exceed n - 1 (" + std::to_string(n - 1) + ")");
  }
  const std::uint32_t others = n - 1;
  std::unordered_set<std::uint32_t> picked;
  std::vector<std::uint32_t> chosen;
  for (NodeId self = 0; self < n; ++self) {
    picked.clear();
    chosen.clear();
    // Floyd: a uniform k-subset of {0, ..., others - 1}.
    for (std::uint32_t j = others - k; j < others; ++j) {
      auto t = static_cast<std::uint32_t>(topology.draw_index(j + 1ULL));
      if (!picked.insert(t).second) {
        picked.insert(j);
        t = j;
      }
      chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    auto& entries = subs_[self];
    entries.reserve(k);
    for (std::uint32_t c : chosen) {
      const NodeId target = c >= self ? c + 1 : c;
      entries.push_back(SubscriptionEntry{target, true, 0.0});
    }
  }
  index_subscribers();
}

DataCenter::DataCenter(const std::vector<std::vector<NodeId>>& targets,
                       double load_window_s)
    : n_(static_cast<std::uint32_t>(targets.size())),
      k_(targets.empty() ? 0 : static_cast<std::uint32_t>(targets[0].size())),
      alive_(targets.size(), 1),
      subs_(targets.size()),
      subscribers_(targets.size()),
      wrong_(targets.size(), 0),
      load_(static_cast<std::uint32_t>(targets.size()), load_window_s) {
  if (n_ == 0) throw ConfigError(0, "data centre needs at least one node");
  for (NodeId self = 0; self < n_; ++self) {
    std::vector<NodeId> sorted = targets[self];
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() != k_ ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
        std::find(sorted.begin(), sorted.end(), self) != sorted.end() ||
        (!sorted.empty() && sorted.back() >= n_)) {
      throw ConfigError(0, "invalid subscription list for node " +
                               std::to_string(self));
    }
    for (NodeId t : sorted) subs_[self].push_back({t, true, 0.0});
  }
  index_subscribers();
}

void DataCenter::index_subscribers() {
  for (NodeId owner = 0; owner < n_; ++owner) {
    for (std::uint32_t slot = 0; slot < subs_[owner].size(); ++slot) {
      subscribers_[subs_[owner][slot].target].push_back({owner, slot});
    }
  }
}

NodeId DataCenter::checked(NodeId id) const {
  if (id >= n_) {
    throw ContractViolation("node id " + std::to_string(id) +
                            " outside data centre of " + std::to_string(n_));
  }
  return id;
}

void DataCenter::set_entry_consistency(NodeId owner, bool was_ok,
                                       bool now_ok) {
  if (was_ok == now_ok) return;
  if (now_ok) {
    if (--wrong_[owner] == 0) --inconsistent_nodes_;
  } else {
    if (wrong_[owner]++ == 0) ++inconsistent_nodes_;
  }
}

void DataCenter::set_liveness(NodeId id, bool alive) {
  const bool before = alive_[checked(id)] != 0;
  if (before == alive) return;
  alive_[id] = alive ? 1 : 0;
  for (const SubscriberRef& ref : subscribers_[id]) {
    const bool believed = subs_[ref.node][ref.slot].believed_alive;
    set_entry_consistency(ref.node, believed == before, believed == alive);
  }
}

std::optional<std::uint32_t> DataCenter::find_subscription(
    NodeId observer, NodeId target) const {
  const auto& entries = subs_[checked(observer)];
  auto it = std::lower_bound(
      entries.begin(), entries.end(), target,
      [](const SubscriptionEntry& e, NodeId t) { return e.target < t; });
  if (it == entries.end() || it->target != target) return std::nullopt;
  return static_cast<std::uint32_t>(it - entries.begin());
}

bool DataCenter::apply_observation(NodeId observer, NodeId target, bool alive,
                                   SimTime observed_at) {
  const auto slot = find_subscription(observer, target);
  if (!slot) {
    throw ContractViolation("node " + std::to_string(observer) +
                            " does not subscribe to " + std::to_string(target));
  }
  return apply_at(observer, *slot, alive, observed_at);
}

bool DataCenter::apply_at(NodeId observer, std::uint32_t slot, bool alive,
                          SimTime observed_at) {
  SubscriptionEntry& e = subs_[checked(observer)].at(slot);
  if (observed_at < e.observed_at) return false;
  const bool truth = alive_[e.target] != 0;
  set_entry_consistency(observer, e.believed_alive == truth, alive == truth);
  e.believed_alive = alive;
  e.observed_at = observed_at;
  return true;
}

}  // namespace hbsim
