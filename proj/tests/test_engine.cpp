#include <cmath>
#include <random>
#include <set>

#include "gridsearch/engine.hpp"
#include "support.hpp"

using namespace gridsearch;

namespace {

PartialGrid row(int len, int gap = -1) {
  std::vector<Coord> nodes;
  std::vector<std::pair<Coord, Coord>> edges;
  for (int x = 0; x < len; ++x) {
    nodes.push_back({x, 0});
    if (x + 1 < len && x != gap) edges.push_back({{x, 0}, {x + 1, 0}});
  }
  // A spine below keeps the row connected when an edge is cut.
  for (int x = 0; x < len; ++x) {
    nodes.push_back({x, -1});
    edges.push_back({{x, 0}, {x, -1}});
    if (x + 1 < len) edges.push_back({{x, -1}, {x + 1, -1}});
  }
  return validate_grid(nodes, edges, {0, 0});
}

struct Suite {
  PartialGrid grid;
  int side;
};

std::vector<Suite> random_suite(std::uint64_t seed, int count, int max_dim) {
  std::mt19937_64 rng(seed);
  std::vector<Suite> out;
  for (int t = 0; t < count; ++t) {
    const int w = 1 + static_cast<int>(rng() % max_dim);
    const int h = 1 + static_cast<int>(rng() % max_dim);
    const double p = 0.45 + 0.55 * static_cast<double>(rng() % 1000) / 1000.0;
    const Coord home = t % 2 ? Coord{static_cast<int>(rng() % w), static_cast<int>(rng() % h)} : Coord{0, 0};
    PartialGrid g = test::random_grid(rng, w, h, p, home);
    const int s = side_for_bound(static_cast<long long>(g.node_count()));
    out.push_back({std::move(g), s});
  }
  return out;
}

}  // namespace

TEST_CASE("initialize: isolated homebase") {
  const PartialGrid g = validate_grid({{0, 0}, {0, 1}}, {{{0, 0}, {0, 1}}}, {0, 0});
  GridWorld world(g);
  Crew crew(world);
  CHECK(initialize(crew, 4) == std::vector<Coord>{{0, 0}});
  CHECK(crew.trace().moves.empty());
}

TEST_CASE("initialize: full homebase row") {
  const PartialGrid g = full_lattice(12, 3);
  GridWorld world(g);
  Crew crew(world);
  const auto c0 = initialize(crew, 9);
  REQUIRE(c0.size() == 10);
  for (int x = 0; x <= 9; ++x) CHECK(c0[static_cast<std::size_t>(x)] == Coord{x, 0});
  CHECK(crew.state().clean_edge_count() == 9);
  CHECK(crew.size() == 10);
}

TEST_CASE("initialize: the component stops at a missing edge") {
  const PartialGrid g = row(9, 3);
  GridWorld world(g);
  Crew crew(world);
  const auto c0 = initialize(crew, 8);
  CHECK(c0 == std::vector<Coord>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
}

TEST_CASE("select_active picks the heaviest, smallest id on ties") {
  CHECK(select_active({{3, 0}}) == 3);
  CHECK(select_active({{1, 4}, {2, 7}}) == 2);
  CHECK(select_active({{1, 5}, {2, 5}}) == 1);
  CHECK(select_active({{4, 5}, {2, 5}, {9, 1}}) == 2);
  CHECK_THROWS_AS_CODE(select_active({}), ErrorCode::EmptyCollection);
}

TEST_CASE("engine bound formula") {
  CHECK(engine_peak_bound(8) == 372);
  CHECK(engine_peak_bound(1) == 50);
  CHECK(engine_peak_bound(5, {8, 6}) == 246);
}

TEST_CASE("grid_searching: single node") {
  const PartialGrid g = full_lattice(1, 1);
  const SearchOutcome o = grid_searching(g, {.side = 1});
  CHECK(o.trace.moves.empty());
  CHECK(o.trace.k == 1);
  CHECK(o.phases.empty());
  CHECK(verify_trace(g, o.trace).ok());
}

TEST_CASE("grid_searching: straight path of 50 nodes") {
  const PartialGrid g = full_lattice(50, 1);
  const SearchOutcome o = grid_searching(g, {.side = 8});
  CHECK(verify_trace(g, o.trace).ok());
  CHECK(o.peak_total <= 372);
  CHECK(o.peak_total <= 10);
  CHECK(assert_lemma_suite(o).all_pass());
}

TEST_CASE("grid_searching: bent path leaving the first rectangle") {
  std::vector<Coord> nodes;
  std::vector<std::pair<Coord, Coord>> edges;
  Coord cur{0, 0};
  nodes.push_back(cur);
  const std::vector<std::pair<Direction, int>> legs{
      {Direction::Up, 7}, {Direction::Left, 9}, {Direction::Down, 14}, {Direction::Right, 20}};
  for (auto [d, len] : legs) {
    for (int k = 0; k < len; ++k) {
      const Coord next = cur + offset(d);
      nodes.push_back(next);
      edges.push_back({cur, next});
      cur = next;
    }
  }
  const PartialGrid g = validate_grid(nodes, edges, {0, 0});
  const SearchOutcome o = grid_searching(g, {.side = 3});
  CHECK(verify_trace(g, o.trace).ok());
  CHECK(o.phases.size() > 1);
}

TEST_CASE("grid_searching: budget") {
  const PartialGrid g = full_lattice(6, 6);
  CHECK_THROWS_AS_CODE(grid_searching(g, {.side = 6, .budget = 2}), ErrorCode::BudgetExceeded);
  const SearchOutcome o = grid_searching(g, {.side = 6, .budget = 2, .throw_on_budget = false});
  CHECK(o.aborted);
  CHECK(o.trace.k <= 2);
  const VerificationReport vr = verify_trace(g, o.trace);
  CHECK(vr.monotone);
  CHECK(vr.connected);
  CHECK_FALSE(vr.complete);
}

TEST_CASE("grid_searching: random suite properties") {
  const auto suite = random_suite(2024, 60, 30);
  for (const Suite& t : suite) {
    CAPTURE(t.grid.node_count());
    CAPTURE(t.side);
    const SearchOutcome o = grid_searching(t.grid, {.side = t.side});
    const VerificationReport vr = verify_trace(t.grid, o.trace);
    REQUIRE(vr.ok());
    CHECK(o.peak_total <= engine_peak_bound(t.side));
    CHECK(o.peak_total == vr.peak_searchers);
    // The engine only ever looks at visited nodes; a query on anything else would throw.
    CHECK(o.nodes_visited == t.grid.node_count());
    const LemmaReport lr = assert_lemma_suite(o);
    for (const LemmaResult& r : lr.results) {
      CAPTURE(r.counterexample);
      CHECK_MESSAGE(r.pass, r.name);
    }
    CHECK(o.violations.empty());

    // At most one present checkpoint per frontier, and a merged checkpoint shares its
    // predecessor's frontier.
    for (const auto& w : o.weights) {
      std::set<std::pair<Coord, int>> frontiers;
      for (const auto& [id, weight] : w) {
        const Frontier& f = o.checkpoints[static_cast<std::size_t>(id)].frontier;
        CHECK(frontiers.insert({f.anchor(), static_cast<int>(f.orientation())}).second);
      }
    }
    for (const CheckpointInfo& c : o.checkpoints) {
      for (int m : c.merged_from) CHECK(o.checkpoints[static_cast<std::size_t>(m)].frontier == c.frontier);
      for (Coord v : c.seeds) CHECK(c.frontier.contains(v));
    }
    // Weight snapshots add up to the guards counted at the start of every step.
    for (const StepRecord& st : o.steps) {
      std::size_t total = 0;
      for (const auto& [id, weight] : o.weights[static_cast<std::size_t>(st.step)]) total += weight;
      CHECK(total == st.guards_at_start);
    }
    if (!o.steps.empty()) CHECK(o.weights.size() == o.steps.size() + 1);
    // Phases partition the steps.
    long long next = 0;
    for (const PhaseRecord& ph : o.phases) {
      CHECK(ph.first_step == next);
      next = ph.last_step + 1;
    }
    CHECK(next == static_cast<long long>(o.steps.size()));
  }
}

TEST_CASE("grid_searching: deterministic") {
  const auto suite = random_suite(99, 5, 20);
  for (const Suite& t : suite) {
    const SearchOutcome a = grid_searching(t.grid, {.side = t.side});
    const SearchOutcome b = grid_searching(t.grid, {.side = t.side});
    CHECK(a.trace == b.trace);
  }
}

TEST_CASE("grid_searching: sweep order variants stay correct") {
  const auto suite = random_suite(314, 20, 25);
  for (const Suite& t : suite) {
    const SearchOutcome o = grid_searching(t.grid, {.side = t.side, .order = SweepOrder::NearSideFirst});
    CHECK(verify_trace(t.grid, o.trace).ok());
  }
}

TEST_CASE("lemma suite flags broken weight histories") {
  SearchOutcome o;
  o.side = 2;
  CheckpointInfo c0;
  c0.id = 0;
  CheckpointInfo c1;
  c1.id = 1;
  o.checkpoints = {c0, c1};
  o.steps = {StepRecord{.step = 0, .active = 0}, StepRecord{.step = 1, .active = 0}};
  o.phases = {PhaseRecord{.index = 0, .first_step = 0, .last_step = 1}};
  // Checkpoint 1 is never active but grows.
  o.weights = {{{0, 3}, {1, 1}}, {{0, 3}, {1, 2}}, {{0, 3}, {1, 2}}};
  const LemmaReport lr = assert_lemma_suite(o);
  CHECK_FALSE(lr.all_pass());
  REQUIRE(lr.find("inactive-non-increase") != nullptr);
  CHECK_FALSE(lr.find("inactive-non-increase")->pass);
  CHECK(lr.find("active-interval")->pass);

  // The active checkpoint grows over its interval.
  o.weights = {{{0, 1}}, {{0, 2}}, {{0, 4}}};
  const LemmaReport lr2 = assert_lemma_suite(o);
  CHECK_FALSE(lr2.find("active-interval")->pass);
  CHECK_FALSE(lr2.find("phase-non-increase")->pass);

  // Phase-end total beyond w(active) + 10s.
  o.weights = {{{0, 1}, {1, 30}}, {{0, 1}, {1, 30}}, {{0, 1}, {1, 30}}};
  const LemmaReport lr3 = assert_lemma_suite(o);
  CHECK_FALSE(lr3.find("phase-end-total")->pass);
  CHECK_FALSE(lr3.find("bottleneck-dominance")->pass);
}

TEST_CASE("round sides and the unknown-size bound") {
  CHECK(round_side(1) == 2);
  CHECK(round_side(2) == 2);
  CHECK(round_side(3) == 3);
  CHECK(round_side(4) == 4);
  CHECK(round_side(7) == 12);
  const double b = unknown_size_bound(46, 256);
  const double expected = std::sqrt(2.0) * 46.0 / (std::sqrt(2.0) - 1.0) * (std::sqrt(512.0) - 1.0);
  CHECK(b == doctest::Approx(expected));
  CHECK(b > 3390.0);
  CHECK(b < 3400.0);
}

TEST_CASE("mod_grid_searching: single node") {
  const PartialGrid g = full_lattice(1, 1);
  const UnknownSizeOutcome o = mod_grid_searching(g, {});
  REQUIRE(o.rounds.size() == 1);
  CHECK(o.rounds[0].success);
  CHECK(o.total_searchers <= 2 * 46);
}

TEST_CASE("mod_grid_searching: round count and total") {
  const PartialGrid g = full_lattice(10, 10);
  const UnknownSizeOutcome o = mod_grid_searching(g, {});
  CHECK(o.rounds.size() <= 7);
  CHECK(static_cast<double>(o.total_searchers) < unknown_size_bound(46, 100));
  CHECK(o.rounds.back().complete);

  const PartialGrid big = full_lattice(16, 16);
  const UnknownSizeOutcome o2 = mod_grid_searching(big, {});
  CHECK(static_cast<double>(o2.total_searchers) < unknown_size_bound(46, 256));
  CHECK(verify_trace(big, o2.final_run.trace).ok());
}

TEST_CASE("mod_grid_searching: small teams force several rounds") {
  const PartialGrid g = full_lattice(20, 20);
  const UnknownSizeOutcome o = mod_grid_searching(g, {.c = 1});
  REQUIRE(o.rounds.size() > 1);
  for (std::size_t i = 0; i + 1 < o.rounds.size(); ++i) {
    const RoundRecord& r = o.rounds[i];
    CHECK_FALSE(r.success);
    CHECK(r.budget == round_side(r.round));
    CHECK(r.monotone);
    CHECK(r.connected);
  }
  CHECK(o.rounds.back().success);
  CHECK(o.rounds.back().complete);
  long long total = 0;
  for (const auto& r : o.rounds) total += r.searchers;
  CHECK(total == o.total_searchers);
}
