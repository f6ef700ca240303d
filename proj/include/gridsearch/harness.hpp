#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridsearch/adversary.hpp"
#include "gridsearch/engine.hpp"
#include "gridsearch/grid.hpp"

namespace gridsearch {

/// Seed for one named consumer of randomness derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

/// w x h lattice with each edge kept with probability p, cut down to the component of (0,0).
/// An isolated origin on a larger lattice is retried with the next derived seed, up to
/// `max_retries` times, then Error{EmptyComponent}.
PartialGrid gen_random(std::uint64_t seed, int width, int height, double keep_prob, int max_retries = 16);

/// One row of the metrics CSV. Unset fields print as empty cells.
struct MetricsRow {
  std::string kind;  // engine, greedy, unknown, attack, ratio
  std::optional<std::size_t> n_nodes;
  std::optional<int> side;
  std::optional<long long> peak_total;
  std::optional<std::size_t> peak_guards;
  std::optional<int> peak_cleaners;
  std::optional<int> peak_explorers;
  std::optional<double> bound;
  std::optional<std::size_t> phases;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> moves;
  std::optional<bool> lemma_suite_pass;
  std::optional<int> l;
  std::optional<int> peak;
  std::optional<double> lower_bound;
  std::optional<int> oracle_mcs;
  std::optional<std::size_t> rounds;

  bool operator==(const MetricsRow&) const = default;
};

extern const std::vector<std::string> kMetricsColumns;

MetricsRow engine_row(const PartialGrid& grid, const SearchOutcome& run, std::optional<bool> lemma_pass);
MetricsRow greedy_row(const PartialGrid& grid, int peak, std::size_t moves);
MetricsRow unknown_row(const PartialGrid& grid, const UnknownSizeOutcome& run);
MetricsRow attack_row(const AttackResult& run, std::optional<int> oracle_mcs);
MetricsRow ratio_row(AttackAlgorithm algorithm, const RatioRecord& r);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
/// Throws Error{ParseError} on a wrong header or malformed cell.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

extern const std::vector<std::string> kStripColumns;
void write_strip_csv(std::ostream& out, const std::vector<StripRecord>& strips);

/// Worst excess of observed strip peaks over a*i + b.
struct Calibration {
  std::size_t strips = 0;
  long long max_excess = 0;  // max over strips of peak - (a*i + b); meaningful when strips > 0
  std::map<int, int> peak_by_depth;
  /// Smallest b' keeping every strip within a*i + b' for the same a.
  int fitted_b = 0;
};

Calibration calibrate(const std::vector<StripRecord>& strips, StripConstants c = {});

std::string format_number(double v);

/// Options shared by the command-line verbs. All randomness flows from `seed`.
struct RunConfig {
  std::string verb;
  std::vector<std::string> inputs;
  std::string output;
  std::optional<int> side;
  std::optional<long long> size_bound;
  StripConstants strip{};
  int c = 46;
  std::uint64_t seed = 0;
  bool check_lemmas = true;
  bool check_bound = true;

  /// Side for a grid of n nodes: explicit side, else from the size bound, else from n.
  int side_for(std::size_t n) const;
};

struct SuiteRun {
  std::uint64_t seed = 0;
  int width = 0;
  int height = 0;
  double keep_prob = 1.0;
  PartialGrid grid;
  SearchOutcome outcome;
  VerificationReport verification;
  LemmaReport lemmas;
  MetricsRow row;
};

/// `runs` random grids with sides in [1, max_side] and keep probability in [0.55, 1], each
/// drawn from the "suite" stream of cfg.seed, searched with the engine and checked.
std::vector<SuiteRun> run_random_suite(const RunConfig& cfg, int runs, int max_side);

}  // namespace gridsearch
