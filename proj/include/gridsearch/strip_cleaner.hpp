#pragma once

#include <vector>

#include "gridsearch/crew.hpp"
#include "gridsearch/grid.hpp"

namespace gridsearch {

/// Linear cleaner allowance a*i + b for a strip of depth i.
struct StripConstants {
  int a = 6;
  int b = 4;
};

long long strip_peak_bound(int i, StripConstants c = {});

/// Order in which the sweep visits the columns of the region (columns run across the long
/// axis of the rectangle).
enum class SweepOrder {
  FarSideFirst,   // from the start column toward the farther end, then back
  NearSideFirst,  // toward the nearer end first
};

struct StripTask {
  Coord homebase;  // guarded, visited, inside the (i-1)-th filled rectangle
  Frontier frontier;
  int depth = 1;
  long long cleaner_budget = 0;
  SweepOrder order = SweepOrder::FarSideFirst;
};

struct StripReport {
  int peak_cleaners = 0;
  int explorers_placed = 0;
  std::vector<Coord> cleared_nodes;  // nodes absorbed by the sweep, in order
  std::size_t moves_emitted = 0;
  std::size_t first_visits = 0;
  bool within_budget = true;
};

/// Clears the contaminated part of the filled depth-th rectangle reachable from the task's
/// homebase. Afterwards every newly reached node that still needs a guard sits on the outer
/// ring and keeps its searcher (an explorer). Over-budget sweeps are reported, not aborted.
StripReport clean_expansion_component(Crew& crew, const StripTask& task);

}  // namespace gridsearch
