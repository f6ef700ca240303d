#include "gridsearch/adversary.hpp"

#include <sstream>

#include "gridsearch/baseline.hpp"

namespace gridsearch {

AdversaryTree::AdversaryTree() { ports_[{0, 0}] = 0; }

std::uint8_t AdversaryTree::ports(Coord c) const {
  auto it = ports_.find(c);
  return it == ports_.end() ? 0 : it->second;
}

std::vector<Coord> AdversaryTree::nodes() const {
  std::vector<Coord> out;
  out.reserve(ports_.size());
  for (const auto& [c, p] : ports_) out.push_back(c);
  return out;
}

PartialGrid AdversaryTree::grid() const { return validate_grid(nodes(), edges_, {0, 0}); }

void AdversaryTree::add_edge(Coord a, Coord b) {
  const Direction d = *direction_between(a, b);
  ports_[a] |= port_bit(d);
  ports_[b] |= port_bit(opposite(d));
  edges_.push_back({a, b});
}

void AdversaryTree::extend(int i) {
  const int d = depth_;
  if (i < 0 || i > d) {
    std::ostringstream os;
    os << "branch index " << i << " outside diagonal " << d;
    throw Error(ErrorCode::IndexOutOfRange, os.str());
  }
  for (int j = 0; j <= d; ++j) {
    const Coord v{j, d - j};
    if (j <= i) add_edge(v, {j, d - j + 1});
    if (j >= i) add_edge(v, {j + 1, d - j});
  }
  sequence_.push_back({i, d - i});
  ++depth_;
}

AdversaryTree extend_at(const AdversaryTree& tree, int i) {
  AdversaryTree out = tree;
  out.extend(i);
  return out;
}

AdversaryTree reconstruct(const std::vector<Coord>& sequence) {
  AdversaryTree t;
  for (std::size_t d = 0; d < sequence.size(); ++d) {
    const Coord c = sequence[d];
    if (c.x < 0 || c.y < 0 || c.x + c.y != static_cast<int>(d)) {
      std::ostringstream os;
      os << "sequence element " << c << " is not on diagonal " << d;
      throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
    t.extend(c.x);
  }
  return t;
}

std::vector<Coord> characteristic_sequence(const PartialGrid& grid) {
  int depth = 0;
  for (Coord c : grid.nodes()) {
    if (c.x < 0 || c.y < 0) throw Error(ErrorCode::InvariantViolation, "node outside the first quadrant");
    depth = std::max(depth, c.x + c.y);
  }
  std::vector<Coord> seq;
  for (int d = 0; d < depth; ++d) {
    std::optional<Coord> branch;
    for (int j = 0; j <= d; ++j) {
      const std::uint8_t p = grid.ports({j, d - j});
      if ((p & port_bit(Direction::Up)) && (p & port_bit(Direction::Right))) {
        if (branch) throw Error(ErrorCode::InvariantViolation, "two branch nodes on one diagonal");
        branch = Coord{j, d - j};
      }
    }
    if (!branch) throw Error(ErrorCode::InvariantViolation, "diagonal without a branch node");
    seq.push_back(*branch);
  }
  if (reconstruct(seq).grid().edges().size() != grid.edge_count()) {
    throw Error(ErrorCode::InvariantViolation, "grid is not a member of the tree family");
  }
  return seq;
}

PartialGrid mirrored(const AdversaryTree& tree) {
  std::vector<Coord> nodes = tree.nodes();
  std::vector<std::pair<Coord, Coord>> edges = tree.edges();
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i] != Coord{0, 0}) nodes.push_back({-nodes[i].x, -nodes[i].y});
  }
  const std::size_t m = edges.size();
  for (std::size_t i = 0; i < m; ++i) {
    edges.push_back({{-edges[i].first.x, -edges[i].first.y}, {-edges[i].second.x, -edges[i].second.y}});
  }
  return validate_grid(std::move(nodes), std::move(edges), {0, 0});
}

AdversaryWorld::AdversaryWorld(int target_depth) : target_(target_depth) {
  if (target_depth < 0) throw Error(ErrorCode::IndexOutOfRange, "negative target depth");
}

void AdversaryWorld::on_first_visit(Coord c) {
  ++first_visits_;
  if (tree_.depth() < target_ && c.x + c.y == tree_.depth()) {
    tree_.extend(c.x);
    commit_times_.push_back(first_visits_);
  }
}

std::uint8_t AdversaryWorld::ports(Coord c) const {
  const std::uint8_t p = tree_.ports(c);
  answered_[c] = p;
  return p;
}

std::optional<std::size_t> AdversaryWorld::total_edges() const {
  if (tree_.depth() < target_) return std::nullopt;
  return tree_.edge_count();
}

bool AdversaryWorld::consistent() const {
  for (const auto& [c, p] : answered_) {
    if (tree_.ports(c) != p) return false;
  }
  return true;
}

const char* to_string(AttackAlgorithm a) { return a == AttackAlgorithm::Engine ? "engine" : "greedy"; }

AttackResult adaptive_adversary(AttackAlgorithm algorithm, int l, const AttackConfig& config) {
  if (l < 1) throw Error(ErrorCode::IndexOutOfRange, "depth must be at least 1");
  const long long n = static_cast<long long>(l + 1) * (l + 2) / 2;
  const std::size_t cap = config.move_cap != 0 ? config.move_cap : static_cast<std::size_t>(100 * n * n);
  AdversaryWorld world(l);
  AttackResult out;
  out.l = l;
  out.algorithm = algorithm;
  out.side = side_for_bound(n);
  if (algorithm == AttackAlgorithm::Engine) {
    EngineConfig ec;
    ec.side = out.side;
    ec.strip = config.strip;
    ec.move_cap = cap;
    SearchOutcome o = grid_searching(world, ec);
    out.lemma_suite_pass = assert_lemma_suite(o).all_pass();
    out.trace = std::move(o.trace);
  } else {
    out.trace = greedy_search(world, cap).trace;
  }
  out.tree = world.tree();
  out.peak = out.trace.k;
  out.consistent = world.consistent();
  if (out.tree.depth() != l) {
    throw Error(ErrorCode::AlgorithmStalled, "the run ended before the deepest diagonal was reached");
  }
  out.verification = verify_trace(out.tree.grid(), out.trace);
  return out;
}

RatioRecord ratio_experiment(AttackAlgorithm algorithm, int l, const OracleConfig& oracle, const AttackConfig& config) {
  const AttackResult a = adaptive_adversary(algorithm, l, config);
  const PartialGrid g = a.tree.grid();
  const auto mcs = mcs_exact(g, std::max(a.peak, 1), oracle);
  if (!mcs) throw Error(ErrorCode::InvariantViolation, "the attacked algorithm beat the exact search number");
  RatioRecord r;
  r.l = l;
  r.n = g.node_count();
  r.peak = a.peak;
  r.mcs = *mcs;
  r.ratio = static_cast<double>(a.peak) / *mcs;
  return r;
}

}  // namespace gridsearch
