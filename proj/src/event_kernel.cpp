#include "tdtm/event_kernel.hpp"

#include <utility>

#include "tdtm/error.hpp"

namespace tdtm {

Kernel::Kernel(std::size_t delta_cap) : delta_cap_(delta_cap) {}

SignalId Kernel::add_signal(std::string scope, std::string name, bool initial) {
  SignalId id{static_cast<std::uint32_t>(signals_.size())};
  signals_.push_back(Signal{id, std::move(scope), std::move(name), initial, initial, 0, 0});
  subs_.emplace_back();
  return id;
}

std::optional<SignalId> Kernel::find(std::string_view scope, std::string_view name) const {
  for (const auto& s : signals_) {
    if (s.scope == scope && s.name == name) return s.id;
  }
  return std::nullopt;
}

EventHandle Kernel::push(Event ev) {
  if (ev.time < now_) {
    throw TimeViolation("event scheduled at t=" + std::to_string(ev.time) +
                        " ps, before current time " + std::to_string(now_) + " ps");
  }
  ev.seq = next_seq_++;
  state_.push_back(State::Pending);
  queue_.push(ev);
  ++stats_.scheduled;
  return EventHandle{ev.seq};
}

EventHandle Kernel::schedule(SignalId signal, bool new_value, SimTime at) {
  if (signal.value >= signals_.size()) {
    throw InvariantViolation("schedule on unknown signal " + std::to_string(signal.value));
  }
  return push(Event{at, 0, signal, new_value, false});
}

EventHandle Kernel::call_at(SimTime at, Action action) {
  auto handle = push(Event{at, 0, SignalId{}, false, true});
  actions_.emplace(handle.seq, std::move(action));
  return handle;
}

bool Kernel::cancel(EventHandle handle) {
  if (handle.seq >= state_.size() || state_[handle.seq] != State::Pending) return false;
  state_[handle.seq] = State::Cancelled;
  actions_.erase(handle.seq);
  ++stats_.cancelled;
  return true;
}

SubscriptionHandle Kernel::on_edge(SignalId signal, Edge edge, EdgeCallback callback) {
  if (signal.value >= signals_.size()) {
    throw InvariantViolation("subscription on unknown signal " + std::to_string(signal.value));
  }
  auto& list = subs_[signal.value];
  list.push_back(
      Subscription{edge, std::make_shared<const EdgeCallback>(std::move(callback)), true});
  return SubscriptionHandle{signal, list.size() - 1};
}

void Kernel::unsubscribe(SubscriptionHandle handle) {
  auto& list = subs_.at(handle.signal.value);
  if (handle.index < list.size()) list[handle.index].active = false;
}

bool Kernel::pending() const {
  return stats_.scheduled != stats_.delivered + stats_.cancelled;
}

void Kernel::drop_cancelled_head() {
  while (!queue_.empty() && state_[queue_.top().seq] == State::Cancelled) queue_.pop();
}

void Kernel::deliver(const Event& ev) {
  if (ev.time < now_) throw InvariantViolation("event delivered out of time order");
  if (ev.time != delta_time_) {
    delta_time_ = ev.time;
    delta_count_ = 0;
  }
  if (++delta_count_ > delta_cap_) {
    throw InvariantViolation("more than " + std::to_string(delta_cap_) +
                             " deliveries at t=" + std::to_string(ev.time) +
                             " ps; combinational loop suspected");
  }
  now_ = ev.time;
  state_[ev.seq] = State::Delivered;
  ++stats_.delivered;

  if (ev.is_action) {
    auto node = actions_.extract(ev.seq);
    if (!node.empty()) node.mapped()();
    return;
  }

  Signal& sig = signals_[ev.signal.value];
  if (sig.value == ev.new_value) return;
  sig.value = ev.new_value;
  sig.last_transition = ev.time;
  ++sig.transition_count;
  if (tracing_) trace_.push_back(Change{ev.time, ev.signal, ev.new_value});

  // Index loop: callbacks may add subscriptions (or signals) while we iterate.
  const std::size_t n = subs_[ev.signal.value].size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sub = subs_[ev.signal.value][i];
    if (!sub.active) continue;
    const bool match = sub.edge == Edge::Any || (sub.edge == Edge::Rising && ev.new_value) ||
                       (sub.edge == Edge::Falling && !ev.new_value);
    if (match) {
      auto cb = sub.callback;
      (*cb)(signals_[ev.signal.value]);
    }
  }
}

std::size_t Kernel::run_until(SimTime deadline) {
  std::size_t delivered = 0;
  for (;;) {
    drop_cancelled_head();
    if (queue_.empty() || queue_.top().time > deadline) break;
    Event ev = queue_.top();
    queue_.pop();
    deliver(ev);
    ++delivered;
  }
  drop_cancelled_head();
  if (!queue_.empty() && deadline > now_) now_ = deadline;
  return delivered;
}

}  // namespace tdtm
