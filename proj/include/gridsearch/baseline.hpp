#pragma once

#include <cstddef>

#include "gridsearch/search_state.hpp"

namespace gridsearch {

struct BaselineOutcome {
  StrategyTrace trace;
  int peak = 0;
  std::size_t nodes_visited = 0;
};

/// Naive reference strategy: depth-first over contaminated edges, absorbing each node as it
/// is reached, with no regions or checkpoints. `move_cap` of 0 means unlimited; past it the
/// run throws Error{AlgorithmStalled}.
BaselineOutcome greedy_search(World& world, std::size_t move_cap = 0);
BaselineOutcome greedy_search(const PartialGrid& grid, std::size_t move_cap = 0);

}  // namespace gridsearch
