#include <random>
#include <set>

#include "gridsearch/engine.hpp"
#include "gridsearch/strip_cleaner.hpp"
#include "support.hpp"

using namespace gridsearch;

namespace {

PartialGrid from_edges(const std::vector<std::pair<Coord, Coord>>& edges) {
  std::set<Coord> nodes{{0, 0}};
  for (auto& [a, b] : edges) {
    nodes.insert(a);
    nodes.insert(b);
  }
  return validate_grid({nodes.begin(), nodes.end()}, edges, {0, 0});
}

// Nodes that are visited and still touch a contaminated edge, straight from the state.
std::set<Coord> needing_guard(const SearchState& st) {
  std::set<Coord> out;
  for (SearchState::NodeId v = 0; v < static_cast<SearchState::NodeId>(st.known_node_count()); ++v) {
    if (st.needs_guard(v)) out.insert(st.coord(v));
  }
  return out;
}

int guard_posts(const Crew& crew) {
  int n = 0;
  for (int s = 0; s < crew.size(); ++s) n += crew.role(s) == Role::Guard;
  return n;
}

}  // namespace

TEST_CASE("strip_peak_bound is linear in the depth") {
  CHECK(strip_peak_bound(1) == 10);
  CHECK(strip_peak_bound(9) == 58);
  CHECK(strip_peak_bound(2, {8, 6}) == 22);
}

TEST_CASE("crew acquires from the pool before introducing searchers") {
  const PartialGrid g = full_lattice(3, 1);
  GridWorld world(g);
  Crew crew(world);
  const auto h = crew.state().homebase_id();
  const int a = crew.acquire_at(h);
  CHECK(crew.size() == 1);
  crew.post_guard(a);
  CHECK(crew.guarded_count() == 1);
  CHECK(crew.guard_at(h) == a);
  crew.release(a);
  CHECK(crew.guarded_count() == 0);
  CHECK(crew.in_use() == 0);
  CHECK(crew.acquire_at(h) == a);
  CHECK(crew.size() == 1);
  CHECK(crew.in_use() == 1);
}

TEST_CASE("crew budget stops new searchers") {
  const PartialGrid g = full_lattice(3, 1);
  GridWorld world(g);
  Crew crew(world, 1);
  crew.post_guard(crew.acquire_at(crew.state().homebase_id()));
  CHECK_THROWS_AS_CODE(crew.acquire_at(crew.state().homebase_id()), ErrorCode::BudgetExceeded);
}

TEST_CASE("crew refuses a recontaminating slide") {
  const PartialGrid g = full_lattice(3, 1);
  GridWorld world(g);
  Crew crew(world);
  const auto h = crew.state().homebase_id();
  const int a = crew.acquire_at(h);
  crew.slide(a, crew.view().neighbor(h, Direction::Right));
  const auto mid = crew.state().id_of({1, 0});
  // Leaving (1,0) uncovered while (1,0)-(2,0) is dirty recontaminates (0,0)-(1,0).
  CHECK_THROWS_AS_CODE(crew.slide(a, h), ErrorCode::InvariantViolation);
  (void)mid;
}

TEST_CASE("absorb keeps guards exactly on nodes that need them") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const PartialGrid g = test::random_grid(rng, 6, 6, 0.8);
    GridWorld world(g);
    Crew crew(world);
    crew.post_guard(crew.acquire_at(crew.state().homebase_id()));
    crew.release_if_unneeded(crew.state().homebase_id());
    // Absorb in breadth-first order over dirty edges until everything is clean.
    std::vector<SearchState::NodeId> order{crew.state().homebase_id()};
    std::set<SearchState::NodeId> queued{crew.state().homebase_id()};
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto v = order[i];
      if (i > 0) crew.absorb(v);
      for (Direction d : kDirections) {
        const auto u = crew.state().neighbor(v, d);
        if (u != SearchState::kNone && queued.insert(u).second) order.push_back(u);
      }
      if (i == 0) continue;
      std::set<Coord> posted;
      for (int s = 0; s < crew.size(); ++s) {
        if (crew.role(s) == Role::Guard) posted.insert(crew.state().position_coord(s));
      }
      REQUIRE(posted == needing_guard(crew.state()));
      REQUIRE(crew.state().clean_subgraph_connected());
    }
    CHECK(crew.state().all_clean());
    CHECK(verify_trace(g, crew.take_trace()).ok());
  }
}

TEST_CASE("strip: single contaminated neighbour needs one cleaner") {
  const PartialGrid g = from_edges({{{0, 0}, {0, 1}}});
  GridWorld world(g);
  Crew crew(world);
  crew.post_guard(crew.acquire_at(crew.state().homebase_id()));
  const StripTask task{{0, 0}, Frontier({0, 0}, Orientation::Horizontal, 2), 1, strip_peak_bound(1)};
  const StripReport rep = clean_expansion_component(crew, task);
  CHECK(rep.peak_cleaners == 1);
  CHECK(rep.explorers_placed == 0);
  CHECK(rep.cleared_nodes == std::vector<Coord>{{0, 1}});
  CHECK(rep.first_visits == 1);
  CHECK(rep.within_budget);
  CHECK(crew.state().all_clean());
}

TEST_CASE("strip: three ring nodes with outward edges become explorers") {
  const PartialGrid g = from_edges({{{0, 0}, {0, 1}},
                                    {{0, 1}, {0, 2}},
                                    {{0, 0}, {-1, 0}},
                                    {{-1, 0}, {-2, 0}},
                                    {{0, 0}, {0, -1}},
                                    {{0, -1}, {0, -2}}});
  GridWorld world(g);
  Crew crew(world);
  crew.post_guard(crew.acquire_at(crew.state().homebase_id()));
  const Frontier f({0, 0}, Orientation::Horizontal, 2);
  const StripReport rep = clean_expansion_component(crew, {{0, 0}, f, 1, strip_peak_bound(1)});
  CHECK(rep.explorers_placed == 3);
  const std::set<Coord> expected{{0, 1}, {-1, 0}, {0, -1}};
  CHECK(needing_guard(crew.state()) == expected);
  for (Coord c : expected) {
    CHECK(on_ring(f, 1, c));
    CHECK(crew.guard_at(crew.state().id_of(c)) != -1);
  }
  CHECK(guard_posts(crew) == 3);
}

TEST_CASE("strip: depth one on a full lattice stays within 6i+4") {
  const PartialGrid g = full_lattice(9, 9, {4, 4});
  GridWorld world(g);
  Crew crew(world);
  const auto c0 = initialize(crew, 3);
  REQUIRE(c0.size() == 4);
  const Frontier f({0, 0}, Orientation::Horizontal, 3);
  const StripReport rep = clean_expansion_component(crew, {{0, 0}, f, 1, strip_peak_bound(1)});
  CHECK(rep.peak_cleaners <= 10);
  for (Coord c : needing_guard(crew.state())) CHECK(on_ring(f, 1, c));
  const VerificationReport vr = verify_trace(g, crew.take_trace());
  CHECK(vr.monotone);
  CHECK(vr.connected);
}

TEST_CASE("strip: newly guarded nodes lie on the outer ring") {
  std::mt19937_64 rng(5);
  int calls = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 5 + static_cast<int>(rng() % 12);
    const int h = 5 + static_cast<int>(rng() % 12);
    const Coord home{static_cast<int>(rng() % w), static_cast<int>(rng() % h)};
    const PartialGrid g = test::random_grid(rng, w, h, 0.75, home);
    const int s = 2 + static_cast<int>(rng() % 4);
    const Frontier f({0, 0}, Orientation::Horizontal, s);
    GridWorld world(g);
    Crew crew(world);
    initialize(crew, s);
    // Run successive depths from every guarded node of the filled rectangle, like one checkpoint.
    for (int i = 1; i <= s; ++i) {
      const std::set<Coord> before = needing_guard(crew.state());
      for (Coord c : before) {
        if (!rectangle_region_membership(f, i - 1, c)) continue;
        const auto v = crew.state().id_of(c);
        if (!crew.guard_required(v)) continue;
        bool inward = false;
        for (Direction d : kDirections) {
          const auto e = crew.state().edge_at(v, d);
          if (e != SearchState::kNone && !crew.state().edge_clean(e) && rectangle_region_membership(f, i, c + offset(d))) {
            inward = true;
          }
        }
        if (!inward) continue;
        const StripReport rep = clean_expansion_component(crew, {c, f, i, strip_peak_bound(i)});
        ++calls;
        CHECK(rep.peak_cleaners <= strip_peak_bound(i));
        for (Coord x : rep.cleared_nodes) {
          CHECK(rectangle_region_membership(f, i, x));
          if (crew.state().needs_guard(crew.state().id_of(x))) CHECK(on_ring(f, i, x));
        }
      }
    }
    const VerificationReport vr = verify_trace(g, crew.take_trace());
    CHECK(vr.legal);
    CHECK(vr.monotone);
    CHECK(vr.connected);
  }
  CHECK(calls > 100);
}
