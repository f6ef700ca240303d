#include "gridsearch/oracle.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_set>

namespace gridsearch {

namespace {

constexpr int kMaxTeam = 16;

struct State {
  std::uint64_t mask = 0;
  std::array<std::uint8_t, kMaxTeam> pos{};

  bool operator==(const State&) const = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::uint64_t h = s.mask * 0x9E3779B97F4A7C15ULL;
    for (std::uint8_t p : s.pos) h = (h ^ p) * 0x100000001B3ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::uint64_t> incident;                // edge mask per node
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, edge) per node
};

Graph index_graph(const PartialGrid& grid) {
  Graph g;
  std::map<Coord, int> id;
  for (Coord c : grid.nodes()) id.emplace(c, g.n++);
  g.incident.assign(static_cast<std::size_t>(g.n), 0);
  g.adj.resize(static_cast<std::size_t>(g.n));
  for (const GridEdge& e : grid.edges()) {
    const int a = id.at(e.a);
    const int b = id.at(e.b);
    const int k = static_cast<int>(g.edges.size());
    g.edges.push_back({a, b});
    g.incident[static_cast<std::size_t>(a)] |= 1ULL << k;
    g.incident[static_cast<std::size_t>(b)] |= 1ULL << k;
    g.adj[static_cast<std::size_t>(a)].push_back({b, k});
    g.adj[static_cast<std::size_t>(b)].push_back({a, k});
  }
  return g;
}

class Search {
 public:
  Search(const Graph& g, int home, const OracleConfig& cfg) : g_(g), home_(home), cfg_(cfg) {
    full_ = g.edges.size() == 64 ? ~0ULL : (1ULL << g.edges.size()) - 1;
    start_ = std::chrono::steady_clock::now();
  }

  bool feasible(int k) {
    State s0;
    for (int i = 0; i < k; ++i) s0.pos[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(home_);
    if (full_ == 0) return true;
    std::unordered_set<State, StateHash> seen{s0};
    std::deque<State> queue{s0};
    while (!queue.empty()) {
      const State s = queue.front();
      queue.pop_front();
      for (int i = 0; i < k; ++i) {
        const int from = s.pos[static_cast<std::size_t>(i)];
        if (i > 0 && s.pos[static_cast<std::size_t>(i - 1)] == from) continue;  // same node, same moves
        const bool shared = (i + 1 < k && s.pos[static_cast<std::size_t>(i + 1)] == from) ||
                            (i > 0 && s.pos[static_cast<std::size_t>(i - 1)] == from);
        for (auto [to, e] : g_.adj[static_cast<std::size_t>(from)]) {
          const std::uint64_t bit = 1ULL << e;
          const std::uint64_t mask = s.mask | bit;
          // Vacating `from` is safe only if another searcher stays or nothing dirty touches it.
          if (!shared && (g_.incident[static_cast<std::size_t>(from)] & ~mask) != 0) continue;
          if ((s.mask & bit) == 0 && s.mask != 0 &&
              (s.mask & (g_.incident[static_cast<std::size_t>(from)] | g_.incident[static_cast<std::size_t>(to)])) == 0) {
            continue;
          }
          State t = s;
          t.mask = mask;
          t.pos[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(to);
          std::sort(t.pos.begin(), t.pos.begin() + k);
          if (mask == full_) return true;
          if (!seen.insert(t).second) continue;
          if (seen.size() > cfg_.state_cap) throw Error(ErrorCode::StateSpaceExceeded, "oracle state cap reached");
          queue.push_back(t);
        }
      }
      if (cfg_.time_limit > 0 && (seen.size() & 0xFFF) == 0) check_time();
    }
    return false;
  }

 private:
  void check_time() const {
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (dt > cfg_.time_limit) throw Error(ErrorCode::OracleTimeout, "oracle exceeded its time limit");
  }

  const Graph& g_;
  int home_;
  OracleConfig cfg_;
  std::uint64_t full_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::optional<int> mcs_exact(const PartialGrid& grid, Coord homebase, int k_max, const OracleConfig& config) {
  if (k_max < 1) throw Error(ErrorCode::IndexOutOfRange, "k_max must be at least 1");
  if (!grid.contains(homebase)) throw Error(ErrorCode::HomebaseMissing, "homebase is not a node of the grid");
  const std::size_t m = grid.edge_count();
  if (m > config.edge_cap || m > 64) {
    throw Error(ErrorCode::StateSpaceExceeded,
                std::to_string(m) + " edges exceed the oracle cap of " + std::to_string(config.edge_cap));
  }
  if (grid.node_count() > 255) throw Error(ErrorCode::StateSpaceExceeded, "too many nodes for the oracle");
  const Graph g = index_graph(grid);
  int home = 0;
  for (Coord c : grid.nodes()) {
    if (c == homebase) break;
    ++home;
  }
  Search search(g, home, config);
  for (int k = 1; k <= k_max; ++k) {
    if (k > kMaxTeam) throw Error(ErrorCode::StateSpaceExceeded, "team too large for the oracle");
    if (search.feasible(k)) return k;
  }
  return std::nullopt;
}

bool mcs_lower_check(const PartialGrid& grid, const StrategyTrace& trace, const OracleConfig& config) {
  if (trace.k < 1) return false;
  return mcs_exact(grid, {0, 0}, trace.k, config).has_value();
}

}  // namespace gridsearch
