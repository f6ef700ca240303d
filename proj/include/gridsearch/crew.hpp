#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gridsearch/search_state.hpp"

namespace gridsearch {

enum class Role : std::uint8_t { Free, Guard, Working };

/// Searcher bookkeeping on top of a SearchState: roles, the free pool, lazily introduced
/// searchers, and the move log. Every slide goes through `slide`, which refuses to
/// recontaminate.
class Crew {
 public:
  using NodeId = SearchState::NodeId;
  static constexpr long long kUnlimited = -1;

  explicit Crew(World& world, long long budget = kUnlimited);

  SearchState& state() { return state_; }
  const SearchState& state() const { return state_; }
  const ExploredView& view() const { return view_; }
  const StrategyTrace& trace() const { return trace_; }
  StrategyTrace take_trace();
  void annotate(const char* kind, long long value);

  int size() const { return state_.searcher_count(); }
  int in_use() const { return in_use_; }
  int working() const { return working_; }
  long long budget() const { return budget_; }
  /// Slides allowed before Error{AlgorithmStalled}; 0 means unlimited.
  void set_move_cap(std::size_t cap) { move_cap_ = cap; }

  /// A node must be held while it is visited and still touches a contaminated edge.
  bool guard_required(NodeId v) const { return state_.visited(v) && state_.dirty_degree(v) > 0; }
  int guard_at(NodeId v) const { return guard_of_[static_cast<std::size_t>(v)]; }
  Role role(int searcher) const { return role_[static_cast<std::size_t>(searcher)]; }
  std::size_t guarded_count() const { return guarded_; }

  /// Brings a searcher to `target`: the nearest free one along clean edges, else a new one
  /// walked from the homebase. The searcher is returned in the Working role.
  /// Throws Error{BudgetExceeded} when a new searcher would exceed the budget.
  int acquire_at(NodeId target);
  void slide(int searcher, NodeId to);
  void post_guard(int searcher);
  void release(int searcher);
  /// Releases the guard of v if v no longer needs one.
  void release_if_unneeded(NodeId v);

  struct AbsorbResult {
    bool first_visit = false;
    std::vector<NodeId> touched;  // w first, then the neighbours whose edge to w was cleared
  };

  /// Clears every contaminated edge between w and the visited nodes around it, visiting w if
  /// needed, and leaves a guard on each touched node that still needs one.
  AbsorbResult absorb(NodeId w);

  /// Peak of `in_use` since the last `reset_window`.
  void reset_window() {
    window_peak_ = in_use_;
    window_cleaners_ = cleaners();
  }
  int window_peak() const { return window_peak_; }

  /// Cleaner accounting for a sweep: working searchers plus guards posted on tracked nodes.
  void begin_tracking();
  void track(NodeId v);
  void untrack(NodeId v);
  int cleaners() const { return working_ + tracked_guards_; }
  int window_cleaners() const { return window_cleaners_; }

 private:
  void ensure_capacity();
  void set_role(int searcher, Role r);
  void bump_peak() {
    window_peak_ = std::max(window_peak_, in_use_);
    window_cleaners_ = std::max(window_cleaners_, cleaners());
  }

  SearchState state_;
  ExploredView view_;
  StrategyTrace trace_;
  long long budget_;
  std::size_t move_cap_ = 0;
  std::vector<Role> role_;
  std::vector<int> guard_of_;
  int in_use_ = 0;
  int working_ = 0;
  int free_ = 0;
  std::size_t guarded_ = 0;
  int window_peak_ = 0;
  std::vector<char> tracked_;
  std::vector<NodeId> tracked_list_;
  int tracked_guards_ = 0;
  int window_cleaners_ = 0;
};

}  // namespace gridsearch
