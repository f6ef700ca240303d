#include "gridsearch/search_state.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

#include "gridsearch/grid_io.hpp"

namespace gridsearch {

SearchState::SearchState(World& world, int initial_searchers) : world_(&world) {
  const NodeId h = intern({0, 0});
  visit(h);
  for (int i = 0; i < initial_searchers; ++i) add_searcher();
}

SearchState::NodeId SearchState::intern(Coord c) {
  auto [it, inserted] = index_.try_emplace(c, static_cast<NodeId>(coords_.size()));
  if (!inserted) return it->second;
  coords_.push_back(c);
  visited_.push_back(0);
  ports_.push_back(0);
  nbr_.push_back({kNone, kNone, kNone, kNone});
  eid_.push_back({kNone, kNone, kNone, kNone});
  dirty_deg_.push_back(0);
  clean_deg_.push_back(0);
  occupants_.emplace_back();
  return it->second;
}

void SearchState::visit(NodeId v) {
  const Coord c = coords_[static_cast<std::size_t>(v)];
  world_->on_first_visit(c);
  const std::uint8_t mask = world_->ports(c);
  visited_[static_cast<std::size_t>(v)] = 1;
  ports_[static_cast<std::size_t>(v)] = mask;
  ++visited_count_;
  for (Direction d : kDirections) {
    if ((mask & port_bit(d)) == 0) continue;
    const int di = static_cast<int>(d);
    const NodeId u = intern(c + offset(d));
    // `intern` may reallocate; index again rather than holding references.
    nbr_[static_cast<std::size_t>(v)][di] = u;
    nbr_[static_cast<std::size_t>(u)][static_cast<int>(opposite(d))] = v;
    if (eid_[static_cast<std::size_t>(v)][di] != kNone) continue;
    const auto e = static_cast<EdgeId>(edges_.size());
    edges_.emplace_back(v, u);
    clean_.push_back(0);
    eid_[static_cast<std::size_t>(v)][di] = e;
    eid_[static_cast<std::size_t>(u)][static_cast<int>(opposite(d))] = e;
    ++dirty_deg_[static_cast<std::size_t>(v)];
    ++dirty_deg_[static_cast<std::size_t>(u)];
  }
}

int SearchState::add_searcher() {
  const int id = static_cast<int>(position_.size());
  position_.push_back(homebase_id());
  occupants_[static_cast<std::size_t>(homebase_id())].push_back(id);
  return id;
}

void SearchState::contaminate(EdgeId e, std::vector<GridEdge>& report) {
  auto& flag = clean_[static_cast<std::size_t>(e)];
  if (!flag) return;
  flag = 0;
  --clean_count_;
  const auto [a, b] = edges_[static_cast<std::size_t>(e)];
  for (NodeId x : {a, b}) {
    --clean_deg_[static_cast<std::size_t>(x)];
    ++dirty_deg_[static_cast<std::size_t>(x)];
  }
  report.push_back(make_edge(coord(a), coord(b)));
}

SlideReport SearchState::apply_slide(const Move& m) {
  if (m.searcher < 0 || m.searcher >= searcher_count()) {
    throw Error(ErrorCode::IllegalMove, "unknown searcher " + std::to_string(m.searcher));
  }
  const NodeId from = position_[static_cast<std::size_t>(m.searcher)];
  if (coord(from) != m.from) {
    std::ostringstream os;
    os << "searcher " << m.searcher << " is at " << coord(from) << ", not " << m.from;
    throw Error(ErrorCode::IllegalMove, os.str());
  }
  const auto dir = direction_between(m.from, m.to);
  if (!dir || edge_at(from, *dir) == kNone) {
    std::ostringstream os;
    os << "no edge " << m.from << " - " << m.to;
    throw Error(ErrorCode::IllegalMove, os.str());
  }
  const EdgeId e = edge_at(from, *dir);
  const NodeId to = neighbor(from, *dir);

  SlideReport report;
  auto& occ = occupants_[static_cast<std::size_t>(from)];
  occ.erase(std::find(occ.begin(), occ.end(), m.searcher));
  occupants_[static_cast<std::size_t>(to)].push_back(m.searcher);
  position_[static_cast<std::size_t>(m.searcher)] = to;
  ++move_count_;
  if (!visited(to)) {
    visit(to);
    report.first_visit = true;
  }
  if (!clean_[static_cast<std::size_t>(e)]) {
    clean_[static_cast<std::size_t>(e)] = 1;
    ++clean_count_;
    for (NodeId x : {from, to}) {
      ++clean_deg_[static_cast<std::size_t>(x)];
      --dirty_deg_[static_cast<std::size_t>(x)];
    }
  }

  // Only the vacated node can start a recontamination cascade.
  std::vector<NodeId> work{from};
  while (!work.empty()) {
    const NodeId v = work.back();
    work.pop_back();
    if (occupancy(v) > 0 || dirty_deg_[static_cast<std::size_t>(v)] == 0) continue;
    for (Direction d : kDirections) {
      const EdgeId f = edge_at(v, d);
      if (f == kNone || !edge_clean(f)) continue;
      contaminate(f, report.recontaminated);
      work.push_back(neighbor(v, d));
    }
  }
  return report;
}

bool SearchState::needs_guard(Coord v) const {
  const NodeId id = id_of(v);
  return id != kNone && needs_guard(id);
}

SearchState::NodeId SearchState::id_of(Coord c) const {
  auto it = index_.find(c);
  return it == index_.end() ? kNone : it->second;
}

bool SearchState::visited(Coord c) const {
  const NodeId id = id_of(c);
  return id != kNone && visited(id);
}

std::vector<SearchState::NodeId> SearchState::clean_path(NodeId from, NodeId to) const {
  if (from == to) return {from};
  std::vector<NodeId> parent(coords_.size(), kNone);
  parent[static_cast<std::size_t>(from)] = from;
  std::deque<NodeId> queue{from};
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (Direction d : kDirections) {
      const EdgeId e = edge_at(v, d);
      if (e == kNone || !edge_clean(e)) continue;
      const NodeId u = neighbor(v, d);
      if (parent[static_cast<std::size_t>(u)] != kNone) continue;
      parent[static_cast<std::size_t>(u)] = v;
      if (u == to) {
        std::vector<NodeId> path{u};
        for (NodeId x = u; x != from;) {
          x = parent[static_cast<std::size_t>(x)];
          path.push_back(x);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(u);
    }
  }
  return {};
}

std::vector<Move> SearchState::relocate(int searcher, Coord target) const {
  const NodeId from = position(searcher);
  const NodeId to = id_of(target);
  std::vector<NodeId> path;
  if (to != kNone) path = clean_path(from, to);
  if (path.empty()) {
    std::ostringstream os;
    os << "no clean path from " << coord(from) << " to " << target;
    throw Error(ErrorCode::NoCleanPath, os.str());
  }
  std::vector<Move> moves;
  for (std::size_t i = 1; i < path.size(); ++i) {
    moves.push_back({searcher, coord(path[i - 1]), coord(path[i])});
  }
  return moves;
}

bool SearchState::clean_subgraph_connected() const {
  if (clean_count_ == 0) return true;
  NodeId start = kNone;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (clean_[e]) {
      start = edges_[e].first;
      break;
    }
  }
  std::vector<char> seen(coords_.size(), 0);
  seen[static_cast<std::size_t>(start)] = 1;
  std::vector<NodeId> stack{start};
  std::size_t reached = 0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (Direction d : kDirections) {
      const EdgeId e = edge_at(v, d);
      if (e == kNone || !edge_clean(e)) continue;
      const NodeId u = neighbor(v, d);
      // Each clean edge is seen from both ends.
      ++reached;
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        stack.push_back(u);
      }
    }
  }
  return reached / 2 == clean_count_;
}

bool SearchState::all_clean() const {
  if (clean_count_ != edges_.size()) return false;
  if (auto total = world_->total_edges()) return *total == edges_.size();
  return true;
}

std::vector<GridEdge> SearchState::clean_edges() const {
  std::vector<GridEdge> out;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (clean_[e]) out.push_back(make_edge(coord(edges_[e].first), coord(edges_[e].second)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ExploredView::require_visited(SearchState::NodeId v) const {
  ++queries_;
  if (v == SearchState::kNone || !state_->visited(v)) {
    std::ostringstream os;
    os << "port query on unvisited node";
    if (v != SearchState::kNone) os << ' ' << state_->coord(v);
    throw Error(ErrorCode::InvariantViolation, os.str());
  }
}

std::uint8_t ExploredView::ports(Coord c) const { return ports(state_->id_of(c)); }

std::uint8_t ExploredView::ports(SearchState::NodeId v) const {
  require_visited(v);
  return state_->ports(v);
}

bool ExploredView::edge_clean(SearchState::NodeId v, Direction d) const {
  require_visited(v);
  const auto e = state_->edge_at(v, d);
  return e != SearchState::kNone && state_->edge_clean(e);
}

SearchState::NodeId ExploredView::neighbor(SearchState::NodeId v, Direction d) const {
  require_visited(v);
  return state_->neighbor(v, d);
}

int ExploredView::dirty_degree(SearchState::NodeId v) const {
  require_visited(v);
  return state_->dirty_degree(v);
}

namespace {

constexpr std::size_t kMaxFailures = 64;

void add_failure(VerificationReport& r, std::size_t i, std::string kind, std::string detail) {
  if (r.failures.size() < kMaxFailures) r.failures.push_back({i, std::move(kind), std::move(detail)});
}

}  // namespace

VerificationReport verify_trace(World& world, const StrategyTrace& trace) {
  VerificationReport r;
  r.peak_searchers = trace.k;
  SearchState state(world, std::max(trace.k, 0));
  bool connected_now = true;
  for (std::size_t i = 0; i < trace.moves.size(); ++i) {
    const Move& m = trace.moves[i];
    bool extends_clean_region = true;
    const std::size_t clean_before = state.clean_edge_count();
    if (m.searcher >= 0 && m.searcher < state.searcher_count()) {
      const auto from = state.position(m.searcher);
      const auto to = state.id_of(m.to);
      const auto dir = direction_between(m.from, m.to);
      if (dir && state.coord(from) == m.from && state.edge_at(from, *dir) != SearchState::kNone) {
        const bool already = state.edge_clean(state.edge_at(from, *dir));
        const bool touches = state.clean_degree(from) > 0 || (to != SearchState::kNone && state.clean_degree(to) > 0);
        extends_clean_region = already || touches || clean_before == 0;
      }
    }
    SlideReport rep;
    try {
      rep = state.apply_slide(m);
    } catch (const Error& e) {
      r.legal = false;
      add_failure(r, i, "illegal", e.what());
      continue;
    }
    ++r.moves_replayed;
    if (!rep.recontaminated.empty()) {
      r.monotone = false;
      r.recontaminated_edges += rep.recontaminated.size();
      std::ostringstream os;
      os << rep.recontaminated.size() << " edge(s) recontaminated, first " << rep.recontaminated.front().a
         << " - " << rep.recontaminated.front().b;
      add_failure(r, i, "recontamination", os.str());
    }
    if (!rep.recontaminated.empty() || !connected_now) {
      connected_now = state.clean_subgraph_connected();
    } else {
      connected_now = extends_clean_region;
    }
    if (!connected_now) {
      r.connected = false;
      add_failure(r, i, "disconnected", "clean subgraph is disconnected");
    }
  }
  r.complete = state.all_clean();
  if (!r.complete) {
    add_failure(r, trace.moves.size(), "incomplete",
                std::to_string(state.known_edge_count() - state.clean_edge_count()) +
                    " known edge(s) still contaminated");
  }
  return r;
}

VerificationReport verify_trace(const PartialGrid& grid, const StrategyTrace& trace) {
  GridWorld world(grid);
  return verify_trace(world, trace);
}

StrategyTrace read_trace(std::istream& in) {
  using detail::parse_fail;
  using detail::parse_int;
  StrategyTrace t;
  bool header = false;
  bool have_k = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') {
      std::istringstream ss(line.substr(first + 1));
      std::string kind;
      long long value = 0;
      if (ss >> kind >> value && (kind == "phase" || kind == "step")) {
        t.annotations.push_back({t.moves.size(), kind, value});
      }
      continue;
    }
    auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gridsearch-trace" || tok[1] != "v1") {
        parse_fail(line_no, "missing 'gridsearch-trace v1' header");
      }
      header = true;
    } else if (tok[0] == "k" && tok.size() == 2) {
      if (have_k) throw Error(ErrorCode::DuplicateRecord, "k given more than once");
      t.k = parse_int(tok[1], line_no);
      have_k = true;
    } else if (tok[0] == "slide" && tok.size() == 6) {
      Move m{parse_int(tok[1], line_no),
             {parse_int(tok[2], line_no), parse_int(tok[3], line_no)},
             {parse_int(tok[4], line_no), parse_int(tok[5], line_no)}};
      if (have_k && (m.searcher < 0 || m.searcher >= t.k)) {
        throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(line_no) + ": searcher id out of range");
      }
      t.moves.push_back(m);
    } else {
      parse_fail(line_no, "unrecognised record '" + tok[0] + "'");
    }
  }
  if (!header) parse_fail(line_no, "empty trace file");
  if (!have_k) parse_fail(line_no, "missing k record");
  return t;
}

void write_trace(std::ostream& out, const StrategyTrace& trace) {
  out << "gridsearch-trace v1\n";
  out << "k " << trace.k << '\n';
  std::size_t a = 0;
  for (std::size_t i = 0; i <= trace.moves.size(); ++i) {
    while (a < trace.annotations.size() && trace.annotations[a].before_move == i) {
      out << "# " << trace.annotations[a].kind << ' ' << trace.annotations[a].value << '\n';
      ++a;
    }
    if (i == trace.moves.size()) break;
    const Move& m = trace.moves[i];
    out << "slide " << m.searcher << ' ' << m.from.x << ' ' << m.from.y << ' ' << m.to.x << ' ' << m.to.y << '\n';
  }
}

}  // namespace gridsearch
