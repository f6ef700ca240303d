#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsearch/crew.hpp"
#include "gridsearch/grid.hpp"
#include "gridsearch/strip_cleaner.hpp"

namespace gridsearch {

struct EngineConfig {
  int side = 1;
  long long budget = Crew::kUnlimited;
  StripConstants strip{};
  SweepOrder order = SweepOrder::FarSideFirst;
  /// When false, running out of budget ends the run with `aborted` set instead of throwing.
  bool throw_on_budget = true;
  /// Slides allowed before Error{AlgorithmStalled}; 0 means unlimited.
  std::size_t move_cap = 0;
};

/// (40 + a) * s + b: the searcher bound for side s and strip constants (a, b).
long long engine_peak_bound(int side, StripConstants c = {});

struct StripRecord {
  long long step = 0;
  Frontier frontier;
  int depth = 0;
  int peak_cleaners = 0;
  long long bound = 0;
  int explorers = 0;
  std::size_t cleared = 0;
};

struct StepRecord {
  long long step = 0;
  int phase = 0;
  int active = -1;
  int depth = 0;
  std::size_t guards_at_start = 0;
  int strips = 0;
  int peak_in_use = 0;
  std::size_t explored = 0;
};

struct PhaseRecord {
  int index = 0;
  long long first_step = 0;
  long long last_step = -1;  // -1 for a phase without steps
  int active_at_end = -1;
  bool upgraded = false;
  std::vector<int> born;
  std::vector<int> died;
};

struct CheckpointInfo {
  int id = -1;
  Frontier frontier{{0, 0}, Orientation::Horizontal, 1};
  std::vector<Coord> seeds;
  int expansions_done = 0;
  int added_in_phase = -1;  // phase whose closing upgrade created it; -1 for the initial one
  int retired_in_phase = -1;
  std::vector<int> merged_from;
  std::size_t explored = 0;
};

struct LemmaResult {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  std::string counterexample;
};

struct LemmaReport {
  std::vector<LemmaResult> results;

  bool all_pass() const;
  const LemmaResult* find(const std::string& name) const;
};

/// Everything a run produces: the strategy, the per-step and per-phase logs, and the
/// weight snapshots the lemma checks read.
struct SearchOutcome {
  StrategyTrace trace;
  int side = 1;
  StripConstants strip{};
  bool aborted = false;
  int peak_total = 0;
  std::size_t peak_guards = 0;
  int peak_cleaners = 0;
  int peak_explorers = 0;
  std::vector<StepRecord> steps;
  std::vector<PhaseRecord> phases;
  std::vector<StripRecord> strips;
  std::vector<CheckpointInfo> checkpoints;  // indexed by id
  /// weights[t]: owned-node counts of the checkpoints present in step t, taken at the start
  /// of the step; the final entry is taken after the last step.
  std::vector<std::map<int, std::size_t>> weights;
  /// Invariant breaches seen while running (ownership partition and similar).
  std::vector<std::string> violations;
  std::size_t nodes_visited = 0;
  std::size_t view_queries = 0;
};

/// The first checkpoint: the homebase's component on the frontier from (0,0) to (s,0).
/// Places a searcher on each of its nodes. Returns the sorted node list.
std::vector<Coord> initialize(Crew& crew, int side);

/// Picks the checkpoint of largest weight, smallest id on ties. Throws Error{EmptyCollection}.
int select_active(const std::map<int, std::size_t>& weights);

/// Runs the known-bound search on an arbitrary world.
SearchOutcome grid_searching(World& world, const EngineConfig& config);
SearchOutcome grid_searching(const PartialGrid& grid, const EngineConfig& config);

/// Checks the weight, bottleneck and predecessor properties on a finished run.
LemmaReport assert_lemma_suite(const SearchOutcome& outcome);

struct RoundRecord {
  int round = 0;
  int side = 0;
  long long budget = 0;
  bool success = false;
  int searchers = 0;
  std::size_t moves = 0;
  bool monotone = true;
  bool connected = true;
  bool complete = false;
};

struct UnknownSizeOutcome {
  std::vector<RoundRecord> rounds;
  long long total_searchers = 0;
  int c = 46;
  SearchOutcome final_run;
};

struct UnknownSizeConfig {
  int c = 46;
  StripConstants strip{};
  int max_rounds = 64;
};

/// Doubling wrapper: round i searches with side ceil(sqrt(2^i)) and a team of c times that.
/// Each round restarts from a fully contaminated network with a new team.
UnknownSizeOutcome mod_grid_searching(const PartialGrid& grid, const UnknownSizeConfig& config);

/// Side used in round i: the smallest s with s*s >= 2^i.
int round_side(int round);

/// (sqrt(2) c / (sqrt(2) - 1)) (sqrt(2n) - 1).
double unknown_size_bound(int c, long long n);

}  // namespace gridsearch
