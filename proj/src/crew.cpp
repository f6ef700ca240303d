#include "gridsearch/crew.hpp"

#include <deque>
#include <sstream>

namespace gridsearch {

Crew::Crew(World& world, long long budget) : state_(world), view_(state_), budget_(budget) {
  ensure_capacity();
}

void Crew::ensure_capacity() {
  if (guard_of_.size() < state_.known_node_count()) {
    guard_of_.resize(state_.known_node_count(), -1);
    tracked_.resize(state_.known_node_count(), 0);
  }
}

void Crew::begin_tracking() {
  for (NodeId v : tracked_list_) tracked_[static_cast<std::size_t>(v)] = 0;
  tracked_list_.clear();
  tracked_guards_ = 0;
}

void Crew::track(NodeId v) {
  char& t = tracked_[static_cast<std::size_t>(v)];
  if (t) return;
  t = 1;
  tracked_list_.push_back(v);
  if (guard_at(v) != -1) ++tracked_guards_;
}

void Crew::untrack(NodeId v) {
  char& t = tracked_[static_cast<std::size_t>(v)];
  if (!t) return;
  t = 0;
  if (guard_at(v) != -1) --tracked_guards_;
}

StrategyTrace Crew::take_trace() {
  trace_.k = state_.searcher_count();
  return std::move(trace_);
}

void Crew::annotate(const char* kind, long long value) {
  trace_.annotations.push_back({trace_.moves.size(), kind, value});
}

void Crew::set_role(int searcher, Role r) {
  Role& cur = role_[static_cast<std::size_t>(searcher)];
  if (cur == r) return;
  if (cur == Role::Free) --free_;
  if (cur == Role::Working) --working_;
  if (cur == Role::Guard) {
    const NodeId v = state_.position(searcher);
    guard_of_[static_cast<std::size_t>(v)] = -1;
    --guarded_;
    if (tracked_[static_cast<std::size_t>(v)]) --tracked_guards_;
  }
  if (r == Role::Free) ++free_;
  if (r == Role::Working) ++working_;
  if (r == Role::Guard) {
    const NodeId v = state_.position(searcher);
    int& slot = guard_of_[static_cast<std::size_t>(v)];
    if (slot != -1) throw Error(ErrorCode::InvariantViolation, "node already has a guard");
    slot = searcher;
    ++guarded_;
    if (tracked_[static_cast<std::size_t>(v)]) ++tracked_guards_;
  }
  in_use_ = state_.searcher_count() - free_;
  cur = r;
}

void Crew::slide(int searcher, NodeId to) {
  if (move_cap_ != 0 && trace_.moves.size() >= move_cap_) {
    throw Error(ErrorCode::AlgorithmStalled, "move cap of " + std::to_string(move_cap_) + " slides reached");
  }
  if (role(searcher) == Role::Guard) set_role(searcher, Role::Working);
  const Move m{searcher, state_.position_coord(searcher), state_.coord(to)};
  const SlideReport rep = state_.apply_slide(m);
  ensure_capacity();
  trace_.moves.push_back(m);
  if (!rep.recontaminated.empty()) {
    std::ostringstream os;
    os << "slide " << m.from << " -> " << m.to << " recontaminated " << rep.recontaminated.size() << " edge(s)";
    throw Error(ErrorCode::InvariantViolation, os.str());
  }
  bump_peak();
}

int Crew::acquire_at(NodeId target) {
  if (free_ > 0) {
    // Nearest free searcher along clean edges.
    std::vector<NodeId> parent(state_.known_node_count(), SearchState::kNone);
    parent[static_cast<std::size_t>(target)] = target;
    std::deque<NodeId> queue{target};
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      for (int s : state_.occupants(v)) {
        if (role(s) != Role::Free) continue;
        set_role(s, Role::Working);
        bump_peak();
        for (NodeId x = v; x != target;) {
          x = parent[static_cast<std::size_t>(x)];
          slide(s, x);
        }
        return s;
      }
      for (Direction d : kDirections) {
        const auto e = state_.edge_at(v, d);
        if (e == SearchState::kNone || !state_.edge_clean(e)) continue;
        const NodeId u = state_.neighbor(v, d);
        if (parent[static_cast<std::size_t>(u)] != SearchState::kNone) continue;
        parent[static_cast<std::size_t>(u)] = v;
        queue.push_back(u);
      }
    }
  }
  if (budget_ != kUnlimited && state_.searcher_count() + 1 > budget_) {
    throw Error(ErrorCode::BudgetExceeded, "team of " + std::to_string(budget_) + " searchers is exhausted");
  }
  const int s = state_.add_searcher();
  role_.push_back(Role::Working);
  ++working_;
  in_use_ = state_.searcher_count() - free_;
  bump_peak();
  const auto path = state_.clean_path(state_.homebase_id(), target);
  if (path.empty()) throw Error(ErrorCode::NoCleanPath, "target is not connected to the homebase");
  for (std::size_t i = 1; i < path.size(); ++i) slide(s, path[i]);
  return s;
}

void Crew::post_guard(int searcher) { set_role(searcher, Role::Guard); }

void Crew::release(int searcher) { set_role(searcher, Role::Free); }

void Crew::release_if_unneeded(NodeId v) {
  const int g = guard_at(v);
  if (g != -1 && !guard_required(v)) release(g);
}

Crew::AbsorbResult Crew::absorb(NodeId w) {
  AbsorbResult out;
  out.touched.push_back(w);
  // Visited neighbours joined to w by a contaminated edge, in port order.
  std::vector<NodeId> around;
  for (Direction d : kDirections) {
    const auto e = state_.edge_at(w, d);
    if (e == SearchState::kNone || state_.edge_clean(e)) continue;
    const NodeId a = state_.neighbor(w, d);
    if (state_.visited(a)) around.push_back(a);
  }
  auto edge_dirty = [&](NodeId a) {
    const auto d = direction_between(state_.coord(w), state_.coord(a));
    return !state_.edge_clean(state_.edge_at(w, *d));
  };

  if (!state_.visited(w)) {
    if (around.empty()) throw Error(ErrorCode::InvariantViolation, "absorbing a node with no visited neighbour");
    out.first_visit = true;
    NodeId from = around.front();
    int mover = -1;
    for (NodeId a : around) {
      if (state_.dirty_degree(a) == 1 && guard_at(a) != -1) {
        from = a;
        mover = guard_at(a);
        break;
      }
    }
    if (mover == -1) mover = acquire_at(from);
    slide(mover, w);
    post_guard(mover);
    out.touched.push_back(from);
  }

  for (NodeId a : around) {
    if (!edge_dirty(a)) continue;
    if (state_.dirty_degree(a) == 1 && guard_at(a) != -1) {
      const int g = guard_at(a);
      slide(g, w);
      release(g);
    } else if (state_.dirty_degree(w) == 1 && guard_at(w) != -1) {
      const int g = guard_at(w);
      slide(g, a);
      release(g);
    } else {
      const int x = acquire_at(a);
      slide(x, w);
      release(x);
    }
    if (std::find(out.touched.begin(), out.touched.end(), a) == out.touched.end()) out.touched.push_back(a);
  }

  for (NodeId x : out.touched) {
    if (guard_required(x) && guard_at(x) == -1) {
      // Only reachable when a visited w had no guard, which the engine never allows.
      throw Error(ErrorCode::InvariantViolation, "guarded node left without a searcher");
    }
    release_if_unneeded(x);
  }
  return out;
}

}  // namespace gridsearch
