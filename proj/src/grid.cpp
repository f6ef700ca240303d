#include "gridsearch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace gridsearch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitEdge: return "NonUnitEdge";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::HomebaseMissing: return "HomebaseMissing";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::NoCleanPath: return "NoCleanPath";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::AlgorithmStalled: return "AlgorithmStalled";
    case ErrorCode::OracleTimeout: return "OracleTimeout";
    case ErrorCode::StateSpaceExceeded: return "StateSpaceExceeded";
    case ErrorCode::OriginOutside: return "OriginOutside";
    case ErrorCode::NoLatticeNodeNearOrigin: return "NoLatticeNodeNearOrigin";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::EmptyComponent: return "EmptyComponent";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::ostream& operator<<(std::ostream& os, Coord c) { return os << '(' << c.x << ',' << c.y << ')'; }

std::optional<Direction> direction_between(Coord a, Coord b) {
  const Coord d = b - a;
  for (Direction dir : kDirections) {
    if (offset(dir) == d) return dir;
  }
  return std::nullopt;
}

GridEdge make_edge(Coord p, Coord q) { return p < q ? GridEdge{p, q} : GridEdge{q, p}; }

std::optional<std::size_t> PartialGrid::index_of(Coord c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint8_t PartialGrid::ports(Coord c) const {
  auto it = index_.find(c);
  return it == index_.end() ? 0 : ports_[it->second];
}

bool PartialGrid::has_edge(Coord p, Coord q) const {
  auto d = direction_between(p, q);
  return d && has_edge(p, *d);
}

std::vector<Coord> PartialGrid::neighbors(Coord c) const {
  std::vector<Coord> out;
  const auto mask = ports(c);
  for (Direction d : kDirections) {
    if (mask & port_bit(d)) out.push_back(c + offset(d));
  }
  return out;
}

PartialGrid validate_grid(std::vector<Coord> nodes, std::vector<std::pair<Coord, Coord>> edges,
                          Coord homebase) {
  PartialGrid g;
  std::unordered_set<Coord, CoordHash> node_set;
  for (Coord c : nodes) {
    if (!node_set.insert(c).second) {
      std::ostringstream msg;
      msg << "node " << c << " listed twice";
      throw Error(ErrorCode::DuplicateRecord, msg.str());
    }
  }
  if (!node_set.count(homebase)) {
    std::ostringstream msg;
    msg << "homebase " << homebase << " is not a node";
    throw Error(ErrorCode::HomebaseMissing, msg.str());
  }

  std::set<GridEdge> edge_set;
  for (auto [p, q] : edges) {
    if (!direction_between(p, q)) {
      std::ostringstream msg;
      msg << "edge " << p << "-" << q << " does not have unit length";
      throw Error(ErrorCode::NonUnitEdge, msg.str());
    }
    if (!node_set.count(p) || !node_set.count(q)) {
      std::ostringstream msg;
      msg << "edge " << p << "-" << q << " has an endpoint that is not a node";
      throw Error(ErrorCode::DanglingEdge, msg.str());
    }
    if (!edge_set.insert(make_edge(p, q)).second) {
      std::ostringstream msg;
      msg << "edge " << p << "-" << q << " listed twice";
      throw Error(ErrorCode::DuplicateRecord, msg.str());
    }
  }

  // Translate so that the homebase is the origin.
  std::sort(nodes.begin(), nodes.end());
  g.nodes_.reserve(nodes.size());
  for (Coord c : nodes) g.nodes_.push_back(c - homebase);
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.index_.emplace(g.nodes_[i], i);
  g.ports_.assign(g.nodes_.size(), 0);
  g.edges_.reserve(edge_set.size());
  for (const GridEdge& e : edge_set) {
    const GridEdge t{e.a - homebase, e.b - homebase};
    g.edges_.push_back(t);
    const Direction d = *direction_between(t.a, t.b);
    g.ports_[g.index_.at(t.a)] |= port_bit(d);
    g.ports_[g.index_.at(t.b)] |= port_bit(opposite(d));
  }

  // Connectivity from the homebase.
  std::vector<char> seen(g.nodes_.size(), 0);
  std::deque<std::size_t> queue{g.index_.at({0, 0})};
  seen[queue.front()] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (Direction d : kDirections) {
      if (!(g.ports_[u] & port_bit(d))) continue;
      const std::size_t v = g.index_.at(g.nodes_[u] + offset(d));
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  if (reached != g.nodes_.size()) {
    std::ostringstream msg;
    msg << reached << " of " << g.nodes_.size() << " nodes reachable from the homebase";
    throw Error(ErrorCode::Disconnected, msg.str());
  }
  return g;
}

PartialGrid full_lattice(int width, int height, Coord home) {
  std::vector<Coord> nodes;
  std::vector<std::pair<Coord, Coord>> edges;
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      nodes.push_back({x, y});
      if (x + 1 < width) edges.push_back({{x, y}, {x + 1, y}});
      if (y + 1 < height) edges.push_back({{x, y}, {x, y + 1}});
    }
  }
  return validate_grid(std::move(nodes), std::move(edges), home);
}

int side_for_bound(long long n) {
  if (n <= 1) return 1;
  auto s = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (s * s < n) ++s;
  while (s > 1 && (s - 1) * (s - 1) >= n) --s;
  return static_cast<int>(s);
}

namespace {

int floor_mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

Frontier::Frontier(Coord anchor, Orientation orientation, int side)
    : anchor_(anchor), orientation_(orientation), side_(side) {
  if (side < 1) throw Error(ErrorCode::IndexOutOfRange, "frontier side must be positive");
  if (floor_mod(anchor.x, side) != 0 || floor_mod(anchor.y, side) != 0) {
    std::ostringstream msg;
    msg << "frontier anchor " << anchor << " is not a multiple of " << side;
    throw Error(ErrorCode::IndexOutOfRange, msg.str());
  }
}

Coord Frontier::end() const {
  return orientation_ == Orientation::Horizontal ? Coord{anchor_.x + side_, anchor_.y}
                                                 : Coord{anchor_.x, anchor_.y + side_};
}

bool Frontier::contains(Coord p) const {
  if (orientation_ == Orientation::Horizontal) {
    return p.y == anchor_.y && p.x >= anchor_.x && p.x <= anchor_.x + side_;
  }
  return p.x == anchor_.x && p.y >= anchor_.y && p.y <= anchor_.y + side_;
}

std::vector<Coord> Frontier::lattice_points() const {
  std::vector<Coord> out;
  out.reserve(side_ + 1);
  const Coord step = orientation_ == Orientation::Horizontal ? Coord{1, 0} : Coord{0, 1};
  Coord c = anchor_;
  for (int k = 0; k <= side_; ++k, c = c + step) out.push_back(c);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Frontier& f) {
  return os << (f.orientation() == Orientation::Horizontal ? 'H' : 'V') << f.anchor();
}

Box rectangle_box(const Frontier& f, int i) {
  if (i < 0 || i > f.side()) {
    std::ostringstream msg;
    msg << "rectangle index " << i << " outside [0," << f.side() << "]";
    throw Error(ErrorCode::IndexOutOfRange, msg.str());
  }
  const Coord a = f.anchor();
  const Coord b = f.end();
  return {a.x - i, a.y - i, b.x + i, b.y + i};
}

std::array<Coord, 4> rectangle_corners(const Frontier& f, int i) {
  const Box box = rectangle_box(f, i);
  if (f.orientation() == Orientation::Horizontal) {
    return {Coord{box.x0, box.y0}, Coord{box.x0, box.y1}, Coord{box.x1, box.y0},
            Coord{box.x1, box.y1}};
  }
  return {Coord{box.x0, box.y0}, Coord{box.x1, box.y0}, Coord{box.x0, box.y1},
          Coord{box.x1, box.y1}};
}

bool rectangle_region_membership(const Frontier& f, int i, Coord p) {
  return rectangle_box(f, i).contains(p);
}

bool on_ring(const Frontier& f, int i, Coord p) { return rectangle_box(f, i).on_boundary(p); }

std::size_t ring_lattice_count(const Frontier& f, int i) {
  const Box box = rectangle_box(f, i);
  if (i == 0) return static_cast<std::size_t>(f.side()) + 1;
  return 2 * static_cast<std::size_t>(box.width() + box.height());
}

std::vector<Coord> ring_nodes(const Frontier& f, int i, const PartialGrid& g) {
  const Box box = rectangle_box(f, i);
  std::vector<Coord> out;
  auto take = [&](Coord c) {
    if (g.contains(c)) out.push_back(c);
  };
  if (i == 0) {
    for (Coord c : f.lattice_points()) take(c);
  } else {
    for (int x = box.x0; x <= box.x1; ++x) {
      take({x, box.y0});
      take({x, box.y1});
    }
    for (int y = box.y0 + 1; y < box.y1; ++y) {
      take({box.x0, y});
      take({box.x1, y});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<Frontier, 10> frontiers_on_rectangle(const Frontier& f) {
  const int s = f.side();
  const Box box = rectangle_box(f, s);
  const auto H = Orientation::Horizontal;
  const auto V = Orientation::Vertical;
  if (f.orientation() == Orientation::Horizontal) {
    // Box is 3s wide and 2s tall.
    return {Frontier({box.x0, box.y0}, H, s),     Frontier({box.x0 + s, box.y0}, H, s),
            Frontier({box.x0 + 2 * s, box.y0}, H, s), Frontier({box.x0, box.y1}, H, s),
            Frontier({box.x0 + s, box.y1}, H, s), Frontier({box.x0 + 2 * s, box.y1}, H, s),
            Frontier({box.x0, box.y0}, V, s),     Frontier({box.x0, box.y0 + s}, V, s),
            Frontier({box.x1, box.y0}, V, s),     Frontier({box.x1, box.y0 + s}, V, s)};
  }
  // Box is 2s wide and 3s tall.
  return {Frontier({box.x0, box.y0}, V, s),     Frontier({box.x0, box.y0 + s}, V, s),
          Frontier({box.x0, box.y0 + 2 * s}, V, s), Frontier({box.x1, box.y0}, V, s),
          Frontier({box.x1, box.y0 + s}, V, s), Frontier({box.x1, box.y0 + 2 * s}, V, s),
          Frontier({box.x0, box.y0}, H, s),     Frontier({box.x0 + s, box.y0}, H, s),
          Frontier({box.x0, box.y1}, H, s),     Frontier({box.x0 + s, box.y1}, H, s)};
}

Checkpoint::Checkpoint(int id_, Frontier frontier_, std::vector<Coord> seeds)
    : id(id_), frontier(frontier_), seed_nodes(std::move(seeds)) {
  std::sort(seed_nodes.begin(), seed_nodes.end());
  seed_nodes.erase(std::unique(seed_nodes.begin(), seed_nodes.end()), seed_nodes.end());
  for (Coord c : seed_nodes) {
    if (!frontier.contains(c)) {
      std::ostringstream msg;
      msg << "checkpoint node " << c << " is not on frontier " << frontier;
      throw Error(ErrorCode::InvariantViolation, msg.str());
    }
  }
}

std::vector<std::vector<Coord>> expansions(const Checkpoint& c, const PartialGrid& g) {
  const Frontier& f = c.frontier;
  std::vector<std::vector<Coord>> out;
  std::unordered_set<Coord, CoordHash> assigned;
  std::vector<Coord> level;
  for (Coord v : c.seed_nodes) {
    if (g.contains(v)) {
      level.push_back(v);
      assigned.insert(v);
    }
  }
  out.push_back(level);
  for (int i = 1; i <= f.side(); ++i) {
    // Nodes reachable from E_{i-1} inside the filled i-th rectangle, minus earlier levels.
    const Box box = rectangle_box(f, i);
    std::unordered_set<Coord, CoordHash> seen(level.begin(), level.end());
    std::deque<Coord> queue(level.begin(), level.end());
    std::vector<Coord> next;
    while (!queue.empty()) {
      const Coord u = queue.front();
      queue.pop_front();
      for (Coord w : g.neighbors(u)) {
        if (!box.contains(w) || !seen.insert(w).second) continue;
        queue.push_back(w);
        if (!assigned.count(w)) next.push_back(w);
      }
    }
    for (Coord w : next) assigned.insert(w);
    std::sort(next.begin(), next.end());
    out.push_back(next);
    level = std::move(next);
  }
  return out;
}

std::vector<Coord> expansion(const Checkpoint& c, int i, const PartialGrid& g) {
  if (i < 1 || i > c.frontier.side()) {
    throw Error(ErrorCode::IndexOutOfRange, "expansion index outside [1, side]");
  }
  return expansions(c, g)[static_cast<std::size_t>(i)];
}

}  // namespace gridsearch
