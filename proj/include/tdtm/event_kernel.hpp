#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tdtm {

// Integer picoseconds. Every delay in the simulator is expressed in this unit.
using SimTime = std::uint64_t;
inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

struct SignalId {
  std::uint32_t value = 0;
  friend auto operator<=>(SignalId, SignalId) = default;
};

enum class Edge { Rising, Falling, Any };

struct Signal {
  SignalId id;
  std::string scope;
  std::string name;
  bool initial_value = false;
  bool value = false;
  SimTime last_transition = 0;
  std::uint64_t transition_count = 0;
};

// A queued value transition. Delivery order is (time, seq).
struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  SignalId signal;
  bool new_value = false;
  bool is_action = false;
};

struct EventHandle {
  std::uint64_t seq = 0;
};

struct SubscriptionHandle {
  SignalId signal;
  std::size_t index = 0;
};

// One recorded value change, kept when tracing is enabled (feeds VCD export).
struct Change {
  SimTime time = 0;
  SignalId signal;
  bool value = false;
};

// Deterministic single-threaded discrete-event kernel.
//
// Signals are 1-bit nets grouped by scope. Callbacks subscribed with on_edge()
// run synchronously at delivery and may schedule further events at or after
// now(). Events at the same timestamp are delivered in insertion order; a
// per-timestamp delivery cap turns zero-delay oscillation into an
// InvariantViolation instead of a hang.
class Kernel {
 public:
  using EdgeCallback = std::function<void(const Signal&)>;
  using Action = std::function<void()>;

  struct Stats {
    std::uint64_t scheduled = 0;
    std::uint64_t delivered = 0;
    std::uint64_t cancelled = 0;
  };

  static constexpr std::size_t kDefaultDeltaCap = 1'000'000;

  explicit Kernel(std::size_t delta_cap = kDefaultDeltaCap);

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  SignalId add_signal(std::string scope, std::string name, bool initial = false);
  std::optional<SignalId> find(std::string_view scope, std::string_view name) const;

  // Throws TimeViolation when at < now().
  EventHandle schedule(SignalId signal, bool new_value, SimTime at);
  EventHandle schedule_after(SignalId signal, bool new_value, SimTime delay) {
    return schedule(signal, new_value, now_ + delay);
  }
  // Timed callback that is not tied to a net (timeouts, deferred decisions).
  EventHandle call_at(SimTime at, Action action);

  // Returns false if the event was already delivered or cancelled.
  bool cancel(EventHandle handle);

  SubscriptionHandle on_edge(SignalId signal, Edge edge, EdgeCallback callback);
  void unsubscribe(SubscriptionHandle handle);

  // Delivers every event with time <= deadline. Afterwards now() is
  // min(deadline, time of the last scheduled event).
  std::size_t run_until(SimTime deadline);
  std::size_t run() { return run_until(kNever); }

  SimTime now() const { return now_; }
  bool value(SignalId id) const { return signals_[id.value].value; }
  const Signal& signal(SignalId id) const { return signals_[id.value]; }
  std::span<const Signal> signals() const { return signals_; }
  bool pending() const;
  const Stats& stats() const { return stats_; }

  void enable_trace(bool on = true) { tracing_ = on; }
  std::span<const Change> trace() const { return trace_; }

 private:
  struct Subscription {
    Edge edge;
    std::shared_ptr<const EdgeCallback> callback;
    bool active = true;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  enum class State : std::uint8_t { Pending, Delivered, Cancelled };

  EventHandle push(Event ev);
  void deliver(const Event& ev);
  void drop_cancelled_head();

  std::vector<Signal> signals_;
  std::vector<std::vector<Subscription>> subs_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<State> state_;
  std::unordered_map<std::uint64_t, Action> actions_;
  std::vector<Change> trace_;
  Stats stats_;
  SimTime now_ = 0;
  SimTime delta_time_ = 0;
  std::size_t delta_count_ = 0;
  std::size_t delta_cap_;
  std::uint64_t next_seq_ = 0;
  bool tracing_ = false;
};

}  // namespace tdtm
