#include "ntnlab/event_queue.hpp"

#include <algorithm>
#include <stdexcept>

namespace ntn {

EventQueue::Handle EventQueue::schedule_at(SimTime at, std::function<void()> fn) {
  if (at < now_) throw std::logic_error("event scheduled in the past");
  const Handle h = next_seq_++;
  heap_.push_back({at, h, std::move(fn)});
  live_.insert(h);
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return h;
}

void EventQueue::cancel(Handle h) { live_.erase(h); }

bool EventQueue::step(SimTime horizon) {
  while (!heap_.empty()) {
    if (heap_.front().at > horizon) return false;
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    if (live_.erase(e.seq) == 0) continue;
    now_ = e.at;
    e.fn();
    return true;
  }
  return false;
}

void EventQueue::run(SimTime horizon) {
  while (step(horizon)) {
  }
}

void Timer::start(SimTime duration, std::function<void()> on_expiry) {
  stop();
  handle_ = q_.schedule_in(duration, [this, fn = std::move(on_expiry)] {
    handle_.reset();
    fn();
  });
}

void Timer::stop() {
  if (handle_) {
    q_.cancel(*handle_);
    handle_.reset();
  }
}

}  // namespace ntn
