#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "tdtm/event_kernel.hpp"

namespace tdtm {

// Per-run generator; only consulted when a mutex resolves a metastable race
// under the seeded-random policy.
using Rng = std::mt19937_64;

enum class MetaPolicy { LowIndex, SeededRandom };
enum class Topology { Tba, Mesh };

std::string_view to_string(MetaPolicy p);
std::string_view to_string(Topology t);
MetaPolicy parse_meta_policy(std::string_view s);
Topology parse_topology(std::string_view s);

struct MutexModel {
  SimTime d_mutex = 30;
  SimTime d_or = 15;
  SimTime d_celement = 25;
  SimTime delta_meta = 5;  // arrivals this close or closer go metastable
  SimTime meta_penalty = 50;
  MetaPolicy policy = MetaPolicy::LowIndex;

  SimTime tba_layer_delay() const { return d_mutex + d_or + d_celement; }
};

struct MutexOutcome {
  std::optional<int> winner;  // 0 = a, 1 = b; empty when neither ever arrives
  SimTime grant_time = kNever;
  bool metastable = false;
};

// Absent requests are kNever and lose to any real arrival.
MutexOutcome mutex_resolve(SimTime t_a, SimTime t_b, const MutexModel& mutex, Rng& rng);

struct GrantVector {
  std::vector<std::uint8_t> grant;
  SimTime grant_time = kNever;
  std::uint32_t meta_events = 0;
  std::uint32_t cells = 0;       // mutex cells in the instantiated network
  std::uint32_t cells_used = 0;  // cells that saw at least one request

  bool one_hot() const;
  std::optional<std::size_t> winner() const;
};

// Binary tournament over ceil(log2 m) layers; missing leaves are byes that
// never arrive. Each cell forwards the earlier of its two subtree requests.
GrantVector tba_arbitrate(std::span<const SimTime> arrivals, const MutexModel& mutex, Rng& rng);

// All-pairs network. Cells resolve in time order; a cell whose two classes
// are both still in contention knocks out the loser.
GrantVector mesh_arbitrate(std::span<const SimTime> arrivals, const MutexModel& mutex, Rng& rng);

GrantVector arbitrate(Topology topology, std::span<const SimTime> arrivals,
                      const MutexModel& mutex, Rng& rng);

struct ArbiterCost {
  std::size_t depth = 0;
  std::size_t cells = 0;
  SimTime latency = 0;
};

ArbiterCost arbiter_cost(Topology topology, std::size_t m, const MutexModel& mutex);

std::size_t ceil_log2(std::size_t m);

}  // namespace tdtm
