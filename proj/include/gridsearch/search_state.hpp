#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridsearch/grid.hpp"

namespace gridsearch {

/// Source of port information for the network being searched.
///
/// The search state asks a world for the ports of a node only after the node has been
/// occupied, which lets a world commit its structure lazily (see the adversary).
class World {
 public:
  virtual ~World() = default;

  /// Called exactly once, when `c` is occupied for the first time and before `ports(c)`.
  virtual void on_first_visit(Coord c) { (void)c; }
  virtual std::uint8_t ports(Coord c) const = 0;
  /// Total edge count when the world knows it up front.
  virtual std::optional<std::size_t> total_edges() const { return std::nullopt; }
};

/// World backed by a fully known partial grid.
class GridWorld final : public World {
 public:
  explicit GridWorld(const PartialGrid& grid) : grid_(&grid) {}

  std::uint8_t ports(Coord c) const override { return grid_->ports(c); }
  std::optional<std::size_t> total_edges() const override { return grid_->edge_count(); }
  const PartialGrid& grid() const { return *grid_; }

 private:
  const PartialGrid* grid_;
};

struct Move {
  int searcher = 0;
  Coord from;
  Coord to;

  friend bool operator==(const Move&, const Move&) = default;
};

/// Free-form marker attached before a move index; the verifier ignores these.
struct TraceAnnotation {
  std::size_t before_move = 0;
  std::string kind;  // "phase" or "step"
  long long value = 0;

  friend bool operator==(const TraceAnnotation&, const TraceAnnotation&) = default;
};

/// Replayable sequence of slides. All k searchers start on the homebase.
struct StrategyTrace {
  int k = 0;
  std::vector<Move> moves;
  std::vector<TraceAnnotation> annotations;

  friend bool operator==(const StrategyTrace&, const StrategyTrace&) = default;
};

struct SlideReport {
  std::vector<GridEdge> recontaminated;
  bool first_visit = false;
};

/// Edge-contamination state machine for one search.
///
/// Nodes and edges are materialized lazily: a node's ports are read from the world when it
/// is first occupied. Node and edge ids are dense indices in discovery order.
class SearchState {
 public:
  using NodeId = int;
  using EdgeId = int;
  static constexpr int kNone = -1;

  explicit SearchState(World& world, int initial_searchers = 0);

  /// Introduces a new searcher on the homebase and returns its id.
  int add_searcher();
  int searcher_count() const { return static_cast<int>(position_.size()); }
  NodeId position(int searcher) const { return position_.at(static_cast<std::size_t>(searcher)); }
  Coord position_coord(int searcher) const { return coord(position(searcher)); }

  /// Slides a searcher along an edge, clears it, and runs the recontamination fixpoint.
  /// Throws Error{IllegalMove}.
  SlideReport apply_slide(const Move& m);

  /// True iff v is an endpoint of a clean edge and incident to a contaminated edge.
  bool needs_guard(Coord v) const;
  bool needs_guard(NodeId v) const { return clean_deg_[v] > 0 && dirty_deg_[v] > 0; }

  /// Shortest slide sequence along clean edges that brings `searcher` to `target`.
  /// Throws Error{NoCleanPath}.
  std::vector<Move> relocate(int searcher, Coord target) const;
  std::vector<NodeId> clean_path(NodeId from, NodeId to) const;

  bool clean_subgraph_connected() const;
  bool all_clean() const;

  // Node-level accessors. `id_of` returns kNone for nodes not yet discovered.
  NodeId id_of(Coord c) const;
  NodeId homebase_id() const { return 0; }
  Coord coord(NodeId v) const { return coords_[static_cast<std::size_t>(v)]; }
  std::size_t known_node_count() const { return coords_.size(); }
  bool visited(NodeId v) const { return visited_[static_cast<std::size_t>(v)] != 0; }
  bool visited(Coord c) const;
  std::size_t visited_count() const { return visited_count_; }
  std::uint8_t ports(NodeId v) const { return ports_[static_cast<std::size_t>(v)]; }
  NodeId neighbor(NodeId v, Direction d) const { return nbr_[static_cast<std::size_t>(v)][static_cast<int>(d)]; }
  EdgeId edge_at(NodeId v, Direction d) const { return eid_[static_cast<std::size_t>(v)][static_cast<int>(d)]; }
  bool edge_clean(EdgeId e) const { return clean_[static_cast<std::size_t>(e)] != 0; }
  int dirty_degree(NodeId v) const { return dirty_deg_[static_cast<std::size_t>(v)]; }
  int clean_degree(NodeId v) const { return clean_deg_[static_cast<std::size_t>(v)]; }
  int occupancy(NodeId v) const { return static_cast<int>(occupants_[static_cast<std::size_t>(v)].size()); }
  std::span<const int> occupants(NodeId v) const { return occupants_[static_cast<std::size_t>(v)]; }

  std::size_t known_edge_count() const { return edges_.size(); }
  std::size_t clean_edge_count() const { return clean_count_; }
  std::size_t move_count() const { return move_count_; }
  std::pair<NodeId, NodeId> edge_endpoints(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::vector<GridEdge> clean_edges() const;

 private:
  NodeId intern(Coord c);
  void visit(NodeId v);
  void contaminate(EdgeId e, std::vector<GridEdge>& report);

  World* world_;
  std::vector<Coord> coords_;
  std::unordered_map<Coord, NodeId, CoordHash> index_;
  std::vector<char> visited_;
  std::vector<std::uint8_t> ports_;
  std::vector<std::array<NodeId, 4>> nbr_;
  std::vector<std::array<EdgeId, 4>> eid_;
  std::vector<int> dirty_deg_;
  std::vector<int> clean_deg_;
  std::vector<std::vector<int>> occupants_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<char> clean_;
  std::vector<NodeId> position_;
  std::size_t clean_count_ = 0;
  std::size_t visited_count_ = 0;
  std::size_t move_count_ = 0;
};

/// Read-only window onto a search state that refuses to describe unvisited nodes.
class ExploredView {
 public:
  explicit ExploredView(const SearchState& state) : state_(&state) {}

  /// Port mask of a visited node. Throws Error{InvariantViolation} for unvisited nodes.
  std::uint8_t ports(Coord c) const;
  std::uint8_t ports(SearchState::NodeId v) const;
  /// Whether the edge leaving visited node v in direction d is clean.
  bool edge_clean(SearchState::NodeId v, Direction d) const;
  SearchState::NodeId neighbor(SearchState::NodeId v, Direction d) const;
  int dirty_degree(SearchState::NodeId v) const;

  bool visited(Coord c) const { return state_->visited(c); }
  bool visited(SearchState::NodeId v) const { return state_->visited(v); }
  std::size_t query_count() const { return queries_; }
  const SearchState& state() const { return *state_; }

 private:
  void require_visited(SearchState::NodeId v) const;

  const SearchState* state_;
  mutable std::size_t queries_ = 0;
};

struct VerificationFailure {
  std::size_t move_index = 0;
  std::string kind;  // "illegal", "recontamination", "disconnected", "incomplete"
  std::string detail;
};

struct VerificationReport {
  bool legal = true;
  bool monotone = true;
  bool connected = true;
  bool complete = false;
  int peak_searchers = 0;
  std::size_t moves_replayed = 0;
  std::size_t recontaminated_edges = 0;
  std::vector<VerificationFailure> failures;

  bool ok() const { return legal && monotone && connected && complete; }
};

/// Replays a trace from all k searchers on the homebase and checks the clearing semantics.
/// Failures are reported, never thrown.
VerificationReport verify_trace(World& world, const StrategyTrace& trace);
VerificationReport verify_trace(const PartialGrid& grid, const StrategyTrace& trace);

StrategyTrace read_trace(std::istream& in);
void write_trace(std::ostream& out, const StrategyTrace& trace);

}  // namespace gridsearch
