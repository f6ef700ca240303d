#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gridsearch/engine.hpp"
#include "gridsearch/grid.hpp"
#include "gridsearch/oracle.hpp"
#include "gridsearch/search_state.hpp"

namespace gridsearch {

/// A member of the staircase tree family: diagonals 0..depth, where each extension hangs the
/// next diagonal under the current one and the chosen branch node gets two children.
class AdversaryTree {
 public:
  /// The single-node tree {(0,0)}.
  AdversaryTree();

  int depth() const { return depth_; }
  /// Branch node chosen on each diagonal 0..depth-1.
  const std::vector<Coord>& sequence() const { return sequence_; }
  std::uint8_t ports(Coord c) const;
  bool contains(Coord c) const { return ports_.count(c) != 0; }
  std::size_t node_count() const { return ports_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::pair<Coord, Coord>>& edges() const { return edges_; }
  std::vector<Coord> nodes() const;
  PartialGrid grid() const;

  /// Grows the tree by one diagonal, branching at (i, depth - i). Throws Error{IndexOutOfRange}.
  void extend(int i);

  bool operator==(const AdversaryTree& o) const { return sequence_ == o.sequence_; }

 private:
  void add_edge(Coord a, Coord b);

  int depth_ = 0;
  std::vector<Coord> sequence_;
  std::map<Coord, std::uint8_t> ports_;
  std::vector<std::pair<Coord, Coord>> edges_;
};

AdversaryTree extend_at(const AdversaryTree& tree, int i);

/// Folds extend_at along a characteristic sequence; element d must lie on diagonal d.
/// Throws Error{IndexOutOfRange}.
AdversaryTree reconstruct(const std::vector<Coord>& sequence);

/// Reads the branch node of every diagonal off the grid itself. Throws Error{InvariantViolation}
/// if the grid is not a member of the family.
std::vector<Coord> characteristic_sequence(const PartialGrid& grid);

/// The tree together with its copy rotated by half a turn, glued at the homebase.
PartialGrid mirrored(const AdversaryTree& tree);

/// World that commits the tree one diagonal at a time: the first visit to any node of the
/// deepest committed diagonal extends the tree at that node, until `target_depth` is reached.
class AdversaryWorld final : public World {
 public:
  explicit AdversaryWorld(int target_depth);

  void on_first_visit(Coord c) override;
  std::uint8_t ports(Coord c) const override;
  std::optional<std::size_t> total_edges() const override;

  const AdversaryTree& tree() const { return tree_; }
  int target_depth() const { return target_; }
  /// Number of first visits seen when each extension was committed.
  const std::vector<std::size_t>& commit_times() const { return commit_times_; }
  /// True iff every port answer given so far still matches the current tree.
  bool consistent() const;

 private:
  int target_;
  AdversaryTree tree_;
  std::vector<std::size_t> commit_times_;
  std::size_t first_visits_ = 0;
  mutable std::map<Coord, std::uint8_t> answered_;
};

enum class AttackAlgorithm { Engine, Greedy };

const char* to_string(AttackAlgorithm a);

struct AttackConfig {
  StripConstants strip{};
  /// 0 selects 100 * N^2 for the final node count N.
  std::size_t move_cap = 0;
};

struct AttackResult {
  int l = 0;
  AttackAlgorithm algorithm = AttackAlgorithm::Engine;
  AdversaryTree tree;
  int side = 0;
  int peak = 0;
  StrategyTrace trace;
  VerificationReport verification;
  bool consistent = true;
  bool lemma_suite_pass = true;  // engine runs only

  double lower_bound() const { return (l + 1) / 2.0; }
};

/// Plays the first-touch adversary against an algorithm until depth l is committed and the
/// run completes. Throws Error{AlgorithmStalled} past the move cap.
AttackResult adaptive_adversary(AttackAlgorithm algorithm, int l, const AttackConfig& config = {});

struct RatioRecord {
  int l = 0;
  std::size_t n = 0;
  int peak = 0;
  int mcs = 0;
  double ratio = 0.0;
};

/// Peak of the algorithm on its adversarial tree against the exact search number of that tree.
RatioRecord ratio_experiment(AttackAlgorithm algorithm, int l, const OracleConfig& oracle, const AttackConfig& config = {});

}  // namespace gridsearch
