#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "gridsearch/grid.hpp"

#define CHECK_THROWS_AS_CODE(expr, expected_code)                      \
  do {                                                                 \
    bool thrown_ = false;                                              \
    try {                                                              \
      (void)(expr);                                                    \
    } catch (const ::gridsearch::Error& e_) {                          \
      thrown_ = true;                                                  \
      CHECK_MESSAGE(e_.code() == (expected_code), std::string(e_.what()));        \
    }                                                                  \
    CHECK_MESSAGE(thrown_, "expected an exception from " #expr);       \
  } while (false)

namespace test {

using gridsearch::Coord;
using gridsearch::Frontier;
using gridsearch::Orientation;
using gridsearch::PartialGrid;

/// Boundary membership computed straight from the four corner points.
inline bool on_ring_by_corners(const Frontier& f, int i, Coord p) {
  const Coord a = f.anchor();
  const Coord e = f.end();
  int x0, x1, y0, y1;
  if (f.orientation() == Orientation::Horizontal) {
    x0 = a.x - i, x1 = e.x + i, y0 = a.y - i, y1 = a.y + i;
  } else {
    x0 = a.x - i, x1 = a.x + i, y0 = a.y - i, y1 = e.y + i;
  }
  const bool in = p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  return in && (p.x == x0 || p.x == x1 || p.y == y0 || p.y == y1);
}

inline bool in_filled(const Frontier& f, int i, Coord p) {
  for (int j = 0; j <= i; ++j) {
    if (on_ring_by_corners(f, j, p)) return true;
  }
  return false;
}

/// Random partial grid: w x h lattice, each edge kept with probability p, origin component.
inline PartialGrid random_grid(std::mt19937_64& rng, int w, int h, double p, Coord home = {0, 0}) {
  std::bernoulli_distribution keep(p);
  std::vector<std::pair<Coord, Coord>> edges;
  std::map<Coord, std::vector<Coord>> adj;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      if (x + 1 < w && keep(rng)) edges.push_back({{x, y}, {x + 1, y}});
      if (y + 1 < h && keep(rng)) edges.push_back({{x, y}, {x, y + 1}});
    }
  }
  for (auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<Coord> comp{home};
  std::vector<Coord> stack{home};
  while (!stack.empty()) {
    Coord v = stack.back();
    stack.pop_back();
    for (Coord u : adj[v]) {
      if (comp.insert(u).second) stack.push_back(u);
    }
  }
  std::vector<std::pair<Coord, Coord>> kept;
  for (auto& e : edges) {
    if (comp.count(e.first)) kept.push_back(e);
  }
  return gridsearch::validate_grid({comp.begin(), comp.end()}, kept, home);
}

/// E_0..E_s from the recursive definition, one reachability search per source node.
inline std::vector<std::vector<Coord>> brute_expansions(const gridsearch::Checkpoint& c, const PartialGrid& g) {
  const Frontier& f = c.frontier;
  std::vector<std::vector<Coord>> out;
  std::set<Coord> earlier;
  std::vector<Coord> prev;
  for (Coord v : c.seed_nodes) {
    if (g.contains(v)) prev.push_back(v);
  }
  earlier.insert(prev.begin(), prev.end());
  out.push_back(prev);
  for (int i = 1; i <= f.side(); ++i) {
    std::set<Coord> level;
    for (Coord u : prev) {
      std::set<Coord> seen{u};
      std::deque<Coord> q{u};
      while (!q.empty()) {
        Coord v = q.front();
        q.pop_front();
        if (!earlier.count(v)) level.insert(v);
        for (Coord w : g.neighbors(v)) {
          if (in_filled(f, i, w) && seen.insert(w).second) q.push_back(w);
        }
      }
    }
    earlier.insert(level.begin(), level.end());
    prev.assign(level.begin(), level.end());
    out.push_back(prev);
  }
  return out;
}

}  // namespace test

namespace test {

inline bool edges_connected(const std::set<gridsearch::GridEdge>& edges) {
  if (edges.empty()) return true;
  std::map<Coord, std::vector<Coord>> adj;
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::set<Coord> seen{edges.begin()->a};
  std::vector<Coord> stack{edges.begin()->a};
  while (!stack.empty()) {
    Coord v = stack.back();
    stack.pop_back();
    for (Coord u : adj[v]) {
      if (seen.insert(u).second) stack.push_back(u);
    }
  }
  return seen.size() == adj.size();
}

}  // namespace test
