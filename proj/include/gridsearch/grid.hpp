#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridsearch/error.hpp"

namespace gridsearch {

struct Coord {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
  friend constexpr Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y}; }
};

std::ostream& operator<<(std::ostream& os, Coord c);

struct CoordHash {
  std::size_t operator()(Coord c) const noexcept {
    const auto ux = static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x));
    const auto uy = static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.y));
    std::uint64_t h = (ux << 32) | uy;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

/// The four port labels of a partial-grid node.
enum class Direction : std::uint8_t { Right = 0, Up = 1, Left = 2, Down = 3 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::Right, Direction::Up,
                                                         Direction::Left, Direction::Down};

constexpr std::uint8_t port_bit(Direction d) { return static_cast<std::uint8_t>(1u << static_cast<int>(d)); }

constexpr Coord offset(Direction d) {
  switch (d) {
    case Direction::Right: return {1, 0};
    case Direction::Up: return {0, 1};
    case Direction::Left: return {-1, 0};
    case Direction::Down: return {0, -1};
  }
  return {0, 0};
}

constexpr Direction opposite(Direction d) {
  return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

/// Direction from `a` to the unit-distance node `b`, if they are lattice neighbours.
std::optional<Direction> direction_between(Coord a, Coord b);

/// Unordered edge stored with `a < b`.
struct GridEdge {
  Coord a;
  Coord b;

  friend constexpr auto operator<=>(const GridEdge&, const GridEdge&) = default;
};

GridEdge make_edge(Coord p, Coord q);

/// Immutable partial grid: unit-distance lattice graph, connected, homebase at the origin.
/// Built only through `validate_grid`, so every instance satisfies the invariants.
class PartialGrid {
 public:
  PartialGrid() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Nodes in lexicographic (x, then y) order.
  std::span<const Coord> nodes() const { return nodes_; }
  /// Edges in lexicographic order of (a, b).
  std::span<const GridEdge> edges() const { return edges_; }

  Coord homebase() const { return {0, 0}; }

  bool contains(Coord c) const { return index_.count(c) != 0; }
  std::optional<std::size_t> index_of(Coord c) const;

  /// Port bitmask of a node (bit per Direction); zero for non-nodes.
  std::uint8_t ports(Coord c) const;
  bool has_edge(Coord c, Direction d) const { return (ports(c) & port_bit(d)) != 0; }
  bool has_edge(Coord p, Coord q) const;

  std::vector<Coord> neighbors(Coord c) const;

 private:
  friend PartialGrid validate_grid(std::vector<Coord>, std::vector<std::pair<Coord, Coord>>, Coord);

  std::vector<Coord> nodes_;
  std::vector<GridEdge> edges_;
  std::vector<std::uint8_t> ports_;
  std::unordered_map<Coord, std::size_t, CoordHash> index_;
};

/// Checks the partial-grid conditions and translates the result so the homebase is (0,0).
/// Throws Error{NonUnitEdge | DanglingEdge | Disconnected | HomebaseMissing | DuplicateRecord}.
PartialGrid validate_grid(std::vector<Coord> nodes, std::vector<std::pair<Coord, Coord>> edges,
                          Coord homebase);

/// Full w x h lattice with the homebase at `home` (coordinates relative to the lower-left corner).
PartialGrid full_lattice(int width, int height, Coord home = {0, 0});

/// Side length used for frontiers: the smallest s with s*s >= n (at least 1).
int side_for_bound(long long n);

enum class Orientation : std::uint8_t { Horizontal, Vertical };

/// Axis-aligned segment of length `side` whose anchor has coordinates divisible by `side`.
class Frontier {
 public:
  Frontier(Coord anchor, Orientation orientation, int side);

  Coord anchor() const { return anchor_; }
  Orientation orientation() const { return orientation_; }
  int side() const { return side_; }
  Coord end() const;
  bool contains(Coord p) const;
  /// Lattice points of the segment, from anchor to end.
  std::vector<Coord> lattice_points() const;

  friend bool operator==(const Frontier&, const Frontier&) = default;
  friend auto operator<=>(const Frontier&, const Frontier&) = default;

 private:
  Coord anchor_;
  Orientation orientation_;
  int side_;
};

std::ostream& operator<<(std::ostream& os, const Frontier& f);

/// Closed lattice box [x0, x1] x [y0, y1].
struct Box {
  int x0, y0, x1, y1;

  bool contains(Coord p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool on_boundary(Coord p) const {
    return contains(p) && (p.x == x0 || p.x == x1 || p.y == y0 || p.y == y1);
  }
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
};

/// Bounding box of the i-th rectangle of a frontier; i = 0 collapses to the frontier itself.
/// Throws IndexOutOfRange unless 0 <= i <= side.
Box rectangle_box(const Frontier& f, int i);

/// The four corners of the i-th rectangle, in the order (x-i,y-i), (x-i,y+i), (x'+i,y'-i),
/// (x'+i,y'+i) for horizontal frontiers and (x-i,y-i), (x+i,y-i), (x'-i,y'+i), (x'+i,y'+i)
/// for vertical ones.
std::array<Coord, 4> rectangle_corners(const Frontier& f, int i);

/// True iff p lies on or inside the i-th rectangle (the union of rings 0..i).
bool rectangle_region_membership(const Frontier& f, int i, Coord p);

/// True iff p lies on the boundary of the i-th rectangle.
bool on_ring(const Frontier& f, int i, Coord p);

/// Number of lattice points on the boundary of the i-th rectangle.
std::size_t ring_lattice_count(const Frontier& f, int i);

/// Grid nodes on the boundary of the i-th rectangle, sorted.
std::vector<Coord> ring_nodes(const Frontier& f, int i, const PartialGrid& g);

/// The ten side-length frontiers tiling the boundary of the side-th rectangle of f.
std::array<Frontier, 10> frontiers_on_rectangle(const Frontier& f);

/// A set of nodes on one frontier plus its expansion counter.
struct Checkpoint {
  int id = -1;
  Frontier frontier;
  std::vector<Coord> seed_nodes;  // sorted
  int expansions_done = 0;

  Checkpoint(int id, Frontier frontier, std::vector<Coord> seeds);
};

/// Offline ground truth: E_0(C), ..., E_side(C) computed on the full grid.
std::vector<std::vector<Coord>> expansions(const Checkpoint& c, const PartialGrid& g);

/// Offline E_i(C) for 1 <= i <= side.
std::vector<Coord> expansion(const Checkpoint& c, int i, const PartialGrid& g);

}  // namespace gridsearch
