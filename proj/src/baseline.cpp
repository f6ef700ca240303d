#include "gridsearch/baseline.hpp"

#include "gridsearch/crew.hpp"

namespace gridsearch {

BaselineOutcome greedy_search(World& world, std::size_t move_cap) {
  Crew crew(world);
  crew.set_move_cap(move_cap);
  const SearchState& st = crew.state();
  const ExploredView& view = crew.view();
  const auto h = st.homebase_id();
  crew.post_guard(crew.acquire_at(h));

  std::vector<SearchState::NodeId> stack;
  auto push_dirty = [&](SearchState::NodeId v) {
    const std::uint8_t ports = view.ports(v);
    // Reverse port order so the first port is expanded first.
    for (auto it = kDirections.rbegin(); it != kDirections.rend(); ++it) {
      if ((ports & port_bit(*it)) != 0 && !view.edge_clean(v, *it)) stack.push_back(view.neighbor(v, *it));
    }
  };
  push_dirty(h);
  while (!stack.empty()) {
    const auto w = stack.back();
    stack.pop_back();
    if (st.visited(w) && st.dirty_degree(w) == 0) continue;
    const bool fresh = !st.visited(w);
    crew.absorb(w);
    if (fresh) push_dirty(w);
  }
  crew.release_if_unneeded(h);

  BaselineOutcome out;
  out.trace = crew.take_trace();
  out.peak = out.trace.k;
  out.nodes_visited = st.visited_count();
  return out;
}

BaselineOutcome greedy_search(const PartialGrid& grid, std::size_t move_cap) {
  GridWorld world(grid);
  return greedy_search(world, move_cap);
}

}  // namespace gridsearch
