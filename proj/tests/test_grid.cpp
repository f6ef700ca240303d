#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gridsearch/grid.hpp"
#include "gridsearch/grid_io.hpp"
#include "support.hpp"

using namespace gridsearch;

TEST_CASE("validate_grid accepts a single node") {
  auto g = validate_grid({{0, 0}}, {}, {0, 0});
  CHECK(g.node_count() == 1);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("validate_grid rejects malformed input") {
  CHECK_THROWS_AS_CODE(validate_grid({{0, 0}, {1, 0}}, {{{0, 0}, {2, 0}}}, {0, 0}), ErrorCode::NonUnitEdge);
  CHECK_THROWS_AS_CODE(validate_grid({{0, 0}}, {{{0, 0}, {1, 0}}}, {0, 0}), ErrorCode::DanglingEdge);
  CHECK_THROWS_AS_CODE(validate_grid({{0, 0}, {1, 0}, {5, 5}}, {{{0, 0}, {1, 0}}}, {0, 0}), ErrorCode::Disconnected);
  CHECK_THROWS_AS_CODE(validate_grid({{0, 0}}, {}, {3, 3}), ErrorCode::HomebaseMissing);
  CHECK_THROWS_AS_CODE(validate_grid({{0, 0}, {0, 0}}, {}, {0, 0}), ErrorCode::DuplicateRecord);
  CHECK_THROWS_AS_CODE(validate_grid({{0, 0}, {1, 0}}, {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}, {0, 0}),
                       ErrorCode::DuplicateRecord);
}

TEST_CASE("validate_grid translates the homebase to the origin") {
  auto g = validate_grid({{5, 5}, {6, 5}}, {{{5, 5}, {6, 5}}}, {5, 5});
  std::vector<Coord> nodes(g.nodes().begin(), g.nodes().end());
  CHECK(nodes == std::vector<Coord>{{0, 0}, {1, 0}});
  CHECK(g.has_edge(Coord{0, 0}, Coord{1, 0}));
  CHECK(g.ports({0, 0}) == port_bit(Direction::Right));
}

TEST_CASE("grid file round trip") {
  auto g = full_lattice(4, 3, {1, 1});
  std::ostringstream a;
  write_grid(a, g);
  std::istringstream in(a.str());
  auto h = read_grid(in);
  std::ostringstream b;
  write_grid(b, h);
  CHECK(a.str() == b.str());
  CHECK(h.node_count() == 12);
  CHECK(h.edge_count() == 17);
}

TEST_CASE("grid reader errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_grid(in);
  };
  CHECK_THROWS_AS_CODE(parse("nonsense\n"), ErrorCode::ParseError);
  CHECK_THROWS_AS_CODE(parse("gridsearch-grid v1\nnode 0 0\n"), ErrorCode::HomebaseMissing);
  CHECK_THROWS_AS_CODE(parse("gridsearch-grid v1\nnode 0 0\nhomebase 0 0\nhomebase 0 0\n"),
                       ErrorCode::DuplicateRecord);
  CHECK_THROWS_AS_CODE(parse("gridsearch-grid v1\nnode 0 x\nhomebase 0 0\n"), ErrorCode::ParseError);
  auto g = parse("gridsearch-grid v1\n# comment\nhomebase 1 0\nnode 1 0\nnode 1 1 # trailing\nedge 1 0 1 1\n");
  CHECK(g.contains({0, 1}));
}

TEST_CASE("side parameter") {
  CHECK(side_for_bound(1) == 1);
  CHECK(side_for_bound(64) == 8);
  CHECK(side_for_bound(65) == 9);
  CHECK(side_for_bound(3600) == 60);
}

TEST_CASE("frontier anchors must be multiples of the side") {
  CHECK_THROWS_AS_CODE(Frontier({1, 0}, Orientation::Horizontal, 3), ErrorCode::IndexOutOfRange);
  Frontier f({-3, 6}, Orientation::Vertical, 3);
  CHECK(f.end() == Coord{-3, 9});
  CHECK(f.contains({-3, 7}));
  CHECK_FALSE(f.contains({-2, 7}));
  CHECK(f.lattice_points().size() == 4);
}

TEST_CASE("rectangle corners") {
  Frontier h({0, 0}, Orientation::Horizontal, 9);
  auto c = rectangle_corners(h, 9);
  CHECK(c[0] == Coord{-9, -9});
  CHECK(c[1] == Coord{-9, 9});
  CHECK(c[2] == Coord{18, -9});
  CHECK(c[3] == Coord{18, 9});
  auto z = rectangle_corners(h, 0);
  CHECK(z[0] == Coord{0, 0});
  CHECK(z[3] == Coord{9, 0});
  Frontier v({0, 0}, Orientation::Vertical, 9);
  auto w = rectangle_corners(v, 2);
  CHECK(w[0] == Coord{-2, -2});
  CHECK(w[1] == Coord{2, -2});
  CHECK(w[2] == Coord{-2, 11});
  CHECK(w[3] == Coord{2, 11});
  CHECK_THROWS_AS_CODE(rectangle_corners(h, 10), ErrorCode::IndexOutOfRange);
  CHECK_THROWS_AS_CODE(rectangle_corners(h, -1), ErrorCode::IndexOutOfRange);
}

TEST_CASE("region membership") {
  Frontier f({0, 0}, Orientation::Horizontal, 9);
  CHECK(rectangle_region_membership(f, 1, {5, 1}));
  CHECK_FALSE(rectangle_region_membership(f, 1, {5, 2}));
  CHECK(rectangle_region_membership(f, 3, {5, 2}));
}

TEST_CASE("ring union equals the filled rectangle") {
  for (int s = 1; s <= 12; ++s) {
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
      Frontier f({0, 0}, o, s);
      for (int i = 0; i <= s; ++i) {
        for (int x = -s - 2; x <= 2 * s + 2; ++x) {
          for (int y = -s - 2; y <= 2 * s + 2; ++y) {
            bool on_some = false;
            for (int j = 0; j <= i && !on_some; ++j) on_some = test::on_ring_by_corners(f, j, {x, y});
            if (on_some != rectangle_region_membership(f, i, {x, y})) {
              FAIL("s=" << s << " i=" << i << " p=(" << x << "," << y << ")");
            }
          }
        }
      }
    }
  }
}

TEST_CASE("ring lattice counts") {
  Frontier f({0, 0}, Orientation::Horizontal, 9);
  auto full = full_lattice(60, 60, {30, 30});
  CHECK(ring_lattice_count(f, 9) == 90);
  CHECK(ring_lattice_count(f, 0) == 10);
  CHECK(ring_lattice_count(f, 1) == 26);
  CHECK(ring_nodes(f, 9, full).size() == 90);
  CHECK(ring_nodes(f, 1, full).size() == 26);
  for (int s = 1; s <= 12; ++s) {
    Frontier g({0, 0}, Orientation::Vertical, s);
    for (int i = 0; i <= s; ++i) {
      std::size_t brute = 0;
      for (int x = -s - 1; x <= 2 * s + 1; ++x) {
        for (int y = -s - 1; y <= 2 * s + 1; ++y) brute += test::on_ring_by_corners(g, i, {x, y}) ? 1 : 0;
      }
      CHECK(ring_lattice_count(g, i) == brute);
      CHECK(brute <= static_cast<std::size_t>(10 * s));
    }
  }
}

TEST_CASE("frontiers on the outer rectangle") {
  Frontier f({0, 0}, Orientation::Horizontal, 9);
  auto fs = frontiers_on_rectangle(f);
  std::set<std::tuple<int, int, int>> got;
  for (const auto& x : fs) got.insert({x.anchor().x, x.anchor().y, static_cast<int>(x.orientation())});
  std::set<std::tuple<int, int, int>> want = {
      {-9, -9, 0}, {0, -9, 0}, {9, -9, 0}, {-9, 9, 0}, {0, 9, 0}, {9, 9, 0},
      {-9, -9, 1}, {-9, 0, 1}, {18, -9, 1}, {18, 0, 1}};
  CHECK(got == want);

  for (int s = 1; s <= 7; ++s) {
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
      Frontier g({s, -2 * s}, o, s);
      auto parts = frontiers_on_rectangle(g);
      std::set<Coord> covered;
      std::size_t total = 0;
      for (const auto& p : parts) {
        CHECK(p.anchor().x % s == 0);
        CHECK(p.anchor().y % s == 0);
        for (Coord c : p.lattice_points()) {
          CHECK(on_ring(g, s, c));
          covered.insert(c);
          ++total;
        }
      }
      CHECK(covered.size() == ring_lattice_count(g, s));
      // Segments overlap only at their endpoints: 10 shared joints.
      CHECK(total == covered.size() + 10);
    }
  }

  Frontier v({0, 0}, Orientation::Vertical, 9);
  auto vs = frontiers_on_rectangle(v);
  std::set<std::tuple<int, int, int>> swapped;
  for (const auto& x : vs) {
    const int flipped = x.orientation() == Orientation::Horizontal ? 1 : 0;
    // Anchors stay the lower-left endpoint under (x,y) -> (y,x).
    swapped.insert({x.anchor().y, x.anchor().x, flipped});
  }
  CHECK(swapped == want);
}

TEST_CASE("checkpoint seeds must lie on the frontier") {
  Frontier f({0, 0}, Orientation::Horizontal, 3);
  CHECK_THROWS_AS_CODE(Checkpoint(0, f, {{0, 1}}), ErrorCode::InvariantViolation);
  Checkpoint c(0, f, {{2, 0}, {0, 0}, {2, 0}});
  CHECK(c.seed_nodes == std::vector<Coord>{{0, 0}, {2, 0}});
}

TEST_CASE("expansion examples") {
  auto path = validate_grid({{0, 0}, {1, 0}, {2, 0}}, {{{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}}, {0, 0});
  Frontier f({0, 0}, Orientation::Horizontal, 9);
  Checkpoint c(0, f, {{0, 0}});
  CHECK(expansion(c, 1, path) == std::vector<Coord>{{1, 0}, {2, 0}});
  CHECK(expansion(c, 2, path).empty());

  auto lone = validate_grid({{0, 0}}, {}, {0, 0});
  CHECK(expansion(c, 1, lone).empty());

  auto full = full_lattice(40, 40, {15, 15});
  std::vector<Coord> seeds = f.lattice_points();
  Checkpoint all(1, f, seeds);
  auto e1 = expansion(all, 1, full);
  CHECK(e1 == ring_nodes(f, 1, full));
  CHECK_THROWS_AS_CODE(expansion(all, 0, full), ErrorCode::IndexOutOfRange);
}

TEST_CASE("expansions agree with the definition on random grids") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int s = 2 + trial % 4;
    auto g = test::random_grid(rng, 4 * s, 4 * s, 0.7);
    Frontier f({0, 0}, trial % 2 ? Orientation::Vertical : Orientation::Horizontal, s);
    std::vector<Coord> seeds;
    for (Coord p : f.lattice_points()) {
      if (g.contains(p) && (rng() % 2 == 0 || p == Coord{0, 0})) seeds.push_back(p);
    }
    Checkpoint c(0, f, seeds);
    auto got = expansions(c, g);
    auto want = test::brute_expansions(c, g);
    REQUIRE(got.size() == want.size());
    std::set<Coord> seen;
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == want[i]);
      for (Coord p : got[i]) {
        CHECK(seen.insert(p).second);
        CHECK(rectangle_region_membership(f, static_cast<int>(i), p));
      }
    }
  }
}
