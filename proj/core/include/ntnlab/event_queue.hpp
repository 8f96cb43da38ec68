#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_set>
#include <vector>

namespace ntn {

/// Virtual time in integer microseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kForever = std::numeric_limits<SimTime>::max();

/// Single-threaded event queue. Events fire in (time, insertion order), so a
/// run is a pure function of its inputs.
class EventQueue {
 public:
  using Handle = std::uint64_t;

  Handle schedule_at(SimTime at, std::function<void()> fn);
  Handle schedule_in(SimTime delay, std::function<void()> fn) {
    return schedule_at(now_ + delay, std::move(fn));
  }
  /// No-op for events that already fired or were cancelled.
  void cancel(Handle h);

  /// Fires the next live event if it is due at or before `horizon`.
  bool step(SimTime horizon = kForever);
  /// Fires events until the queue drains or the next event is past `horizon`.
  void run(SimTime horizon = kForever);

  SimTime now() const { return now_; }
  bool empty() const { return live_.empty(); }

 private:
  struct Entry {
    SimTime at;
    Handle seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  std::vector<Entry> heap_;
  std::unordered_set<Handle> live_;
  SimTime now_ = 0;
  Handle next_seq_ = 0;
};

/// One-shot restartable timer bound to a queue.
class Timer {
 public:
  explicit Timer(EventQueue& q) : q_(q) {}
  Timer(const Timer&) = delete;
  Timer& operator=(const Timer&) = delete;

  void start(SimTime duration, std::function<void()> on_expiry);
  void stop();
  bool running() const { return handle_.has_value(); }

 private:
  EventQueue& q_;
  std::optional<EventQueue::Handle> handle_;
};

}  // namespace ntn
