#include "gridsearch/strip_cleaner.hpp"

#include <cstdlib>
#include <functional>
#include <queue>
#include <tuple>
#include <unordered_set>

namespace gridsearch {

long long strip_peak_bound(int i, StripConstants c) {
  return static_cast<long long>(c.a) * i + c.b;
}

namespace {

class SweepKey {
 public:
  SweepKey(const Box& box, Orientation o, Coord start, SweepOrder order) : horizontal_(o == Orientation::Horizontal) {
    lo_ = horizontal_ ? box.x0 : box.y0;
    hi_ = horizontal_ ? box.x1 : box.y1;
    c0_ = along(start);
    const bool far_high = (hi_ - c0_) >= (c0_ - lo_);
    first_high_ = order == SweepOrder::FarSideFirst ? far_high : !far_high;
    first_len_ = first_high_ ? hi_ - c0_ : c0_ - lo_;
  }

  std::pair<int, int> operator()(Coord p) const {
    const int u = along(p);
    const bool on_first = first_high_ ? u >= c0_ : u <= c0_;
    const int rank = on_first ? std::abs(u - c0_) : first_len_ + std::abs(u - c0_);
    return {rank, horizontal_ ? p.y : p.x};
  }

 private:
  int along(Coord p) const { return horizontal_ ? p.x : p.y; }

  bool horizontal_;
  int lo_ = 0, hi_ = 0, c0_ = 0, first_len_ = 0;
  bool first_high_ = true;
};

}  // namespace

StripReport clean_expansion_component(Crew& crew, const StripTask& task) {
  using NodeId = SearchState::NodeId;
  const SearchState& st = crew.state();
  const ExploredView& view = crew.view();
  const Box box = rectangle_box(task.frontier, task.depth);
  const SweepKey key(box, task.frontier.orientation(), task.homebase, task.order);

  const NodeId start = st.id_of(task.homebase);
  if (start == SearchState::kNone || !st.visited(start) || crew.guard_at(start) == -1) {
    throw Error(ErrorCode::InvariantViolation, "strip must start from a guarded visited node");
  }

  StripReport report;
  const std::size_t moves0 = crew.trace().moves.size();
  std::unordered_set<NodeId> swept{start};
  std::unordered_set<NodeId> fresh;
  using Item = std::tuple<int, int, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

  auto push_candidates = [&](NodeId v) {
    const std::uint8_t ports = view.ports(v);
    for (Direction d : kDirections) {
      if ((ports & port_bit(d)) == 0 || view.edge_clean(v, d)) continue;
      const NodeId u = view.neighbor(v, d);
      const Coord c = st.coord(u);
      if (!box.contains(c) || swept.count(u)) continue;
      const auto [rank, cross] = key(c);
      queue.push({rank, cross, u});
    }
  };

  // Cleaners: searchers on the move plus posts on nodes this sweep reached first. Old guards
  // count once they leave their posts; explorer posts are dropped from the count.
  crew.begin_tracking();
  push_candidates(start);
  while (!queue.empty()) {
    const NodeId w = std::get<2>(queue.top());
    queue.pop();
    if (swept.count(w)) continue;
    const bool was_visited = st.visited(w);
    if (!was_visited) {
      fresh.insert(w);
      crew.track(w);
      ++report.first_visits;
    }
    crew.reset_window();
    crew.absorb(w);
    report.peak_cleaners = std::max(report.peak_cleaners, crew.window_cleaners());
    swept.insert(w);
    report.cleared_nodes.push_back(st.coord(w));
    if (!was_visited && crew.guard_required(w)) {
      const std::uint8_t ports = view.ports(w);
      for (Direction d : kDirections) {
        if ((ports & port_bit(d)) == 0 || view.edge_clean(w, d)) continue;
        if (!box.contains(st.coord(w) + offset(d))) {
          crew.untrack(w);
          break;
        }
      }
    }
    push_candidates(w);
  }
  crew.begin_tracking();

  for (NodeId v : fresh) {
    if (crew.guard_required(v)) ++report.explorers_placed;
  }
  report.moves_emitted = crew.trace().moves.size() - moves0;
  report.within_budget = report.peak_cleaners <= task.cleaner_budget;
  return report;
}

}  // namespace gridsearch
