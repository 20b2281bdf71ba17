#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hbsim/event_queue.hpp"

namespace hbsim {

using NodeId = std::uint32_t;

/// A place on the one-hop network where traffic is counted: a node's link
/// or the shared switch.
class Component {
 public:
  static constexpr Component link(NodeId id) noexcept { return Component(id); }
  static constexpr Component network_switch() noexcept {
    return Component(kSwitchIndex);
  }

  constexpr bool is_switch() const noexcept { return index_ == kSwitchIndex; }
  /// Node id of a link component. Meaningless for the switch.
  constexpr NodeId node() const noexcept { return index_; }

  friend constexpr bool operator==(Component, Component) = default;

 private:
  static constexpr std::uint32_t kSwitchIndex = 0xffffffffu;
  explicit constexpr Component(std::uint32_t index) : index_(index) {}
  std::uint32_t index_;
};

struct AccessCounts {
  std::uint64_t messages = 0;
  std::uint64_t payload_entries = 0;
};

struct LoadRow {
  std::int64_t window = 0;  // window index; start time = window * width
  Component component = Component::network_switch();
  AccessCounts counts;
};

/**
 * Access counts per component aggregated into fixed-width time windows.
 *
 * The window currently being written is held densely (one slot per link
 * plus the switch); older windows are compacted to their non-zero rows as
 * soon as a later window is opened.
 */
class LoadLog {
 public:
  LoadLog(std::uint32_t node_count, double window_width);

  double window_width() const noexcept { return width_; }
  std::int64_t window_of(SimTime t) const noexcept;

  void record(Component c, SimTime t, std::uint64_t messages,
              std::uint64_t payload_entries = 0);

  /// Counts for (window, component); zero when nothing was recorded.
  AccessCounts at(std::int64_t window, Component c) const;

  /// Non-zero rows ordered by window, then links by id, then the switch.
  std::vector<LoadRow> rows() const;

  /// Totals over all windows for one component.
  AccessCounts total(Component c) const;

 private:
  using Slot = std::uint32_t;
  using Sparse = std::vector<std::pair<Slot, AccessCounts>>;

  Slot slot_of(Component c) const noexcept {
    return c.is_switch() ? node_count_ : c.node();
  }
  Component component_of(Slot s) const noexcept {
    return s == node_count_ ? Component::network_switch()
                            : Component::link(s);
  }
  void close_open_window();

  std::uint32_t node_count_;
  double width_;
  std::int64_t open_window_ = -1;
  std::vector<AccessCounts> open_;
  std::map<std::int64_t, Sparse> closed_;
  std::vector<AccessCounts> totals_;
};

}  // namespace hbsim
