#pragma once

#include <cstddef>
#include <optional>

#include "gridsearch/grid.hpp"
#include "gridsearch/search_state.hpp"

namespace gridsearch {

struct OracleConfig {
  std::size_t edge_cap = 16;
  std::size_t state_cap = 20'000'000;
  /// Wall-clock limit in seconds for one call; 0 disables it.
  double time_limit = 0.0;
};

/// Smallest k <= k_max admitting a monotone connected k-search of `grid` from `homebase`,
/// or nullopt when none does. Searchers are interchangeable, so states are (clean edge set,
/// sorted positions). Throws Error{StateSpaceExceeded} past the edge or state cap and
/// Error{OracleTimeout} past the time limit.
std::optional<int> mcs_exact(const PartialGrid& grid, Coord homebase, int k_max, const OracleConfig& config = {});
inline std::optional<int> mcs_exact(const PartialGrid& grid, int k_max, const OracleConfig& config = {}) {
  return mcs_exact(grid, {0, 0}, k_max, config);
}

/// True iff no monotone connected search with fewer searchers than the trace's team is
/// ruled out, i.e. trace.k >= mcs. Guards against impossibly efficient strategies.
bool mcs_lower_check(const PartialGrid& grid, const StrategyTrace& trace, const OracleConfig& config = {});

}  // namespace gridsearch
