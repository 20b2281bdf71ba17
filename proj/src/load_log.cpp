#include "hbsim/load_log.hpp"

#include <algorithm>
#include <cmath>

#include "hbsim/errors.hpp"

namespace hbsim {

LoadLog::LoadLog(std::uint32_t node_count, double window_width)
    : node_count_(node_count),
      width_(window_width),
      totals_(static_cast<std::size_t>(node_count) + 1) {
  if (!(window_width > 0.0)) {
    throw ParameterError("load window width must be positive");
  }
}

std::int64_t LoadLog::window_of(SimTime t) const noexcept {
  return static_cast<std::int64_t>(std::floor(t / width_));
}

void LoadLog::close_open_window() {
  if (open_window_ < 0) return;
  Sparse& rows = closed_[open_window_];
  for (Slot s = 0; s < open_.size(); ++s) {
    if (open_[s].messages == 0 && open_[s].payload_entries == 0) continue;
    auto it = std::lower_bound(
        rows.begin(), rows.end(), s,
        [](const auto& row, Slot key) { return row.first < key; });
    if (it != rows.end() && it->first == s) {
      it->second.messages += open_[s].messages;
      it->second.payload_entries += open_[s].payload_entries;
    } else {
      rows.insert(it, {s, open_[s]});
    }
  }
  if (rows.empty()) closed_.erase(open_window_);
}

void LoadLog::record(Component c, SimTime t, std::uint64_t messages,
                     std::uint64_t payload_entries) {
  if (!c.is_switch() && c.node() >= node_count_) {
    throw ContractViolation("load: component outside the data centre");
  }
  if (!(t >= 0.0)) {
    throw ContractViolation("load: negative timestamp");
  }
  const Slot slot = slot_of(c);
  const std::int64_t w = window_of(t);
  totals_[slot].messages += messages;
  totals_[slot].payload_entries += payload_entries;

  if (w > open_window_) {
    close_open_window();
    open_window_ = w;
    open_.assign(static_cast<std::size_t>(node_count_) + 1, AccessCounts{});
  }
  if (w == open_window_) {
    open_[slot].messages += messages;
    open_[slot].payload_entries += payload_entries;
    return;
  }
  // Late write into an already compacted window.
  Sparse& rows = closed_[w];
  auto it = std::lower_bound(
      rows.begin(), rows.end(), slot,
      [](const auto& row, Slot key) { return row.first < key; });
  if (it == rows.end() || it->first != slot) {
    it = rows.insert(it, {slot, AccessCounts{}});
  }
  it->second.messages += messages;
  it->second.payload_entries += payload_entries;
}

AccessCounts LoadLog::at(std::int64_t window, Component c) const {
  const Slot slot = slot_of(c);
  AccessCounts out;
  if (window == open_window_ && slot < open_.size()) out = open_[slot];
  if (auto w = closed_.find(window); w != closed_.end()) {
    for (const auto& [s, counts] : w->second) {
      if (s == slot) {
        out.messages += counts.messages;
        out.payload_entries += counts.payload_entries;
      }
    }
  }
  return out;
}

std::vector<LoadRow> LoadLog::rows() const {
  std::map<std::int64_t, std::map<Slot, AccessCounts>> merged;
  for (const auto& [w, sparse] : closed_) {
    for (const auto& [s, counts] : sparse) merged[w][s] = counts;
  }
  if (open_window_ >= 0) {
    for (Slot s = 0; s < open_.size(); ++s) {
      if (open_[s].messages == 0 && open_[s].payload_entries == 0) continue;
      AccessCounts& dst = merged[open_window_][s];
      dst.messages += open_[s].messages;
      dst.payload_entries += open_[s].payload_entries;
    }
  }
  std::vector<LoadRow> out;
  for (const auto& [w, slots] : merged) {
    for (const auto& [s, counts] : slots) {
      out.push_back(LoadRow{w, component_of(s), counts});
    }
  }
  return out;
}

AccessCounts LoadLog::total(Component c) const { return totals_[slot_of(c)]; }

}  // namespace hbsim
