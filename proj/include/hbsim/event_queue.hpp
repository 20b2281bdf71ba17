#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hbsim/errors.hpp"

namespace hbsim {

using SimTime = double;

template <typename Action>
struct Event {
  SimTime fire_time = 0.0;
  std::uint64_t seq = 0;
  Action action{};
};

/// Raised by EventQueue::run when the dispatcher throws. Carries the
/// coordinates of the offending event.
class DispatchError : public Error {
 public:
  DispatchError(SimTime fire_time, std::uint64_t seq, const std::string& cause)
      : Error("dispatcher failed on event seq=" + std::to_string(seq) +
              " t=" + std::to_string(fire_time) + ": " + cause),
        fire_time_(fire_time),
        seq_(seq) {}

  SimTime fire_time() const noexcept { return fire_time_; }
  std::uint64_t seq() const noexcept { return seq_; }

 private:
  SimTime fire_time_;
  std::uint64_t seq_;
};

/**
 * Time-ordered queue of pending actions plus the simulation clock.
 *
 * Events fire in (fire_time, seq) order. `seq` is the insertion counter, so
 * events scheduled for the same instant fire in the order they were
 * scheduled. The clock only moves forward.
 */
template <typename Action>
class EventQueue {
 public:
  using EventType = Event<Action>;

  SimTime now() const noexcept { return now_; }
  std::size_t pending() const noexcept { return heap_.size(); }
  bool empty() const noexcept { return heap_.empty(); }

  /// Enqueues `action` at now() + delay and returns its sequence number.
  std::uint64_t schedule(SimTime delay, Action action) {
    if (!(delay >= 0.0) || !std::isfinite(delay)) {
      throw SchedulingError("cannot schedule with delay " +
                            std::to_string(delay));
    }
    const std::uint64_t seq = next_seq_++;
    heap_.push(EventType{now_ + delay, seq, std::move(action)});
    return seq;
  }

  /// Enqueues `action` at absolute time `fire_time` (>= now()).
  std::uint64_t schedule_at(SimTime fire_time, Action action) {
    if (!(fire_time >= now_) || !std::isfinite(fire_time)) {
      throw SchedulingError("cannot schedule at " + std::to_string(fire_time) +
                            " before clock " + std::to_string(now_));
    }
    const std::uint64_t seq = next_seq_++;
    heap_.push(EventType{fire_time, seq, std::move(action)});
    return seq;
  }

  /// Fire time of the earliest pending event. Queue must be non-empty.
  SimTime next_time() const { return heap_.top().fire_time; }

  /**
   * Processes every event with fire_time <= end_time, advancing the clock to
   * each event before invoking `dispatch(event)`. The dispatcher may
   * schedule further events. On return the clock reads end_time.
   */
  template <typename Dispatcher>
  std::size_t run(SimTime end_time, Dispatcher&& dispatch) {
    if (end_time < now_) {
      throw SchedulingError("run end time " + std::to_string(end_time) +
                            " precedes clock " + std::to_string(now_));
    }
    std::size_t processed = 0;
    while (!heap_.empty() && heap_.top().fire_time <= end_time) {
      EventType ev = heap_.top();
      heap_.pop();
      now_ = ev.fire_time;
      try {
        dispatch(static_cast<const EventType&>(ev));
      } catch (const DispatchError&) {
        throw;
      } catch (const std::exception& e) {
        throw DispatchError(ev.fire_time, ev.seq, e.what());
      }
      ++processed;
    }
    now_ = end_time;
    return processed;
  }

 private:
  struct Later {
    bool operator()(const EventType& a, const EventType& b) const noexcept {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<EventType, std::vector<EventType>, Later> heap_;
  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace hbsim
