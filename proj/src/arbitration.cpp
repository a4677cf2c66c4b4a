#include "tdtm/arbitration.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "tdtm/error.hpp"

namespace tdtm {

std::string_view to_string(MetaPolicy p) {
  return p == MetaPolicy::LowIndex ? "low-index" : "seeded-random";
}

std::string_view to_string(Topology t) { return t == Topology::Tba ? "tba" : "mesh"; }

MetaPolicy parse_meta_policy(std::string_view s) {
  if (s == "low-index") return MetaPolicy::LowIndex;
  if (s == "seeded-random") return MetaPolicy::SeededRandom;
  throw ConfigError("wta.policy: expected low-index or seeded-random, got '" + std::string(s) +
                    "'");
}

Topology parse_topology(std::string_view s) {
  if (s == "tba") return Topology::Tba;
  if (s == "mesh") return Topology::Mesh;
  throw ConfigError("arbiter: expected tba or mesh, got '" + std::string(s) + "'");
}

std::size_t ceil_log2(std::size_t m) {
  std::size_t layers = 0;
  while ((std::size_t{1} << layers) < m) ++layers;
  return layers;
}

MutexOutcome mutex_resolve(SimTime t_a, SimTime t_b, const MutexModel& mutex, Rng& rng) {
  if (t_a == kNever && t_b == kNever) return {};
  if (t_b == kNever) return {0, t_a + mutex.d_mutex, false};
  if (t_a == kNever) return {1, t_b + mutex.d_mutex, false};
  const SimTime gap = t_a > t_b ? t_a - t_b : t_b - t_a;
  if (gap > mutex.delta_meta) {
    return t_a < t_b ? MutexOutcome{0, t_a + mutex.d_mutex, false}
                     : MutexOutcome{1, t_b + mutex.d_mutex, false};
  }
  const int winner = mutex.policy == MetaPolicy::LowIndex ? 0 : static_cast<int>(rng() & 1);
  return {winner, std::max(t_a, t_b) + mutex.d_mutex + mutex.meta_penalty, true};
}

bool GrantVector::one_hot() const {
  return std::count(grant.begin(), grant.end(), std::uint8_t{1}) == 1;
}

std::optional<std::size_t> GrantVector::winner() const {
  if (!one_hot()) return std::nullopt;
  return static_cast<std::size_t>(std::find(grant.begin(), grant.end(), 1) - grant.begin());
}

GrantVector tba_arbitrate(std::span<const SimTime> arrivals, const MutexModel& mutex, Rng& rng) {
  const std::size_t m = arrivals.size();
  if (m == 0) throw ConfigError("tba_arbitrate: needs at least one input");
  GrantVector out;
  out.grant.assign(m, 0);
  out.cells = static_cast<std::uint32_t>(m - 1);

  struct Node {
    SimTime req = kNever;  // penalty-free request leaving this subtree
    std::optional<std::size_t> winner;
    SimTime extra = 0;     // metastable settling accumulated on the winner's path
    bool real = false;     // subtree holds at least one real input
  };
  const std::size_t width = std::size_t{1} << ceil_log2(m);
  std::vector<Node> level(width);
  for (std::size_t i = 0; i < m; ++i) {
    level[i].req = arrivals[i];
    level[i].real = true;
    if (arrivals[i] != kNever) level[i].winner = i;
  }

  while (level.size() > 1) {
    std::vector<Node> up(level.size() / 2);
    for (std::size_t n = 0; n < up.size(); ++n) {
      const Node& l = level[2 * n];
      const Node& r = level[2 * n + 1];
      Node& p = up[n];
      if (!l.real || !r.real) {
        // Bye: a lone real subtree passes through a delay-matched buffer, no cell.
        if (l.real || r.real) {
          p = l.real ? l : r;
          if (p.req != kNever) p.req += mutex.tba_layer_delay();
        }
        continue;
      }
      p.real = true;
      if (l.req == kNever && r.req == kNever) continue;
      ++out.cells_used;
      const MutexOutcome o = mutex_resolve(l.req, r.req, mutex, rng);
      const Node& w = *o.winner == 0 ? l : r;
      p.winner = w.winner;
      p.extra = w.extra;
      if (o.metastable) {
        ++out.meta_events;
        p.extra += std::max(l.req, r.req) - std::min(l.req, r.req) + mutex.meta_penalty;
      }
      p.req = std::min(l.req, r.req) + mutex.tba_layer_delay();
    }
    level = std::move(up);
  }

  if (level[0].winner) {
    out.grant[*level[0].winner] = 1;
    out.grant_time = level[0].req + level[0].extra;
  }
  return out;
}

GrantVector mesh_arbitrate(std::span<const SimTime> arrivals, const MutexModel& mutex, Rng& rng) {
  const std::size_t m = arrivals.size();
  if (m == 0) throw ConfigError("mesh_arbitrate: needs at least one input");
  GrantVector out;
  out.grant.assign(m, 0);
  out.cells = static_cast<std::uint32_t>(m * (m - 1) / 2);

  if (m == 1) {
    if (arrivals[0] != kNever) {
      out.grant[0] = 1;
      out.grant_time = arrivals[0];
    }
    return out;
  }

  struct Cell {
    std::size_t i, j;
    MutexOutcome o;
  };
  std::vector<Cell> cells;
  cells.reserve(out.cells);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      cells.push_back({i, j, mutex_resolve(arrivals[i], arrivals[j], mutex, rng)});
      if (cells.back().o.winner) ++out.cells_used;
    }
  }
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(cells[a].o.grant_time, cells[a].i, cells[a].j) <
           std::tie(cells[b].o.grant_time, cells[b].i, cells[b].j);
  });

  std::vector<SimTime> knocked_out(m, kNever);
  for (std::size_t c : order) {
    const Cell& cell = cells[c];
    if (!cell.o.winner) continue;
    if (knocked_out[cell.i] != kNever || knocked_out[cell.j] != kNever) continue;
    if (cell.o.metastable) ++out.meta_events;
    const std::size_t loser = *cell.o.winner == 0 ? cell.j : cell.i;
    knocked_out[loser] = cell.o.grant_time;
  }

  std::optional<std::size_t> w;
  for (std::size_t i = 0; i < m; ++i) {
    if (arrivals[i] != kNever && knocked_out[i] == kNever) w = i;
  }
  if (!w) return out;

  SimTime settle = 0;
  for (const Cell& cell : cells) {
    if (cell.i != *w && cell.j != *w) continue;
    const std::size_t other = cell.i == *w ? cell.j : cell.i;
    const bool won = *cell.o.winner == (cell.i == *w ? 0 : 1);
    const SimTime t = won ? cell.o.grant_time
                          : std::max(arrivals[*w] + mutex.d_mutex, knocked_out[other]);
    settle = std::max(settle, t);
  }
  out.grant[*w] = 1;
  out.grant_time = settle + (m - 2) * mutex.d_mutex;
  return out;
}

GrantVector arbitrate(Topology topology, std::span<const SimTime> arrivals,
                      const MutexModel& mutex, Rng& rng) {
  return topology == Topology::Tba ? tba_arbitrate(arrivals, mutex, rng)
                                   : mesh_arbitrate(arrivals, mutex, rng);
}

ArbiterCost arbiter_cost(Topology topology, std::size_t m, const MutexModel& mutex) {
  if (m == 0) throw ConfigError("arbiter_cost: needs at least one input");
  if (topology == Topology::Tba) {
    const std::size_t depth = ceil_log2(m);
    return {depth, m - 1, depth * mutex.tba_layer_delay()};
  }
  return {m - 1, m * (m - 1) / 2, (m - 1) * mutex.d_mutex};
}

}  // namespace tdtm
