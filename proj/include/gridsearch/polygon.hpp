#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gridsearch/grid.hpp"

namespace gridsearch {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

using Ring = std::vector<Point2>;

/// A polygon with holes, the lattice pitch r and the point the search starts from.
struct PolygonEnv {
  Ring outer;
  std::vector<Ring> holes;
  double r = 1.0;
  Point2 origin;
};

/// Checks the rings (at least three vertices, simple, holes strictly inside the outer ring and
/// pairwise disjoint) and orients them: outer counterclockwise, holes clockwise.
/// Throws Error{InvalidPolygon}.
PolygonEnv normalize_polygon(PolygonEnv env);

/// Strict interior: points on a ring count as outside.
bool polygon_contains(const PolygonEnv& env, Point2 p);

/// True iff the closed segment touches any ring segment.
bool segment_hits_boundary(const PolygonEnv& env, Point2 a, Point2 b);

struct PolygonGrid {
  PartialGrid grid;
  /// Lattice index of the homebase; grid coordinate c sits at (c + anchor) * r in the plane.
  Coord anchor;
  std::size_t inside_points = 0;
  std::size_t inside_edges = 0;
  /// Node counts of the components that were cut off from the homebase, largest first.
  std::vector<std::size_t> discarded_components;

  Point2 to_plane(Coord c, double r) const { return {(c.x + anchor.x) * r, (c.y + anchor.y) * r}; }
};

/// Lattice points at multiples of r strictly inside the polygon become nodes; two neighbours
/// are joined iff their segment touches no ring and its midpoint is inside. The homebase is
/// the inside lattice point nearest the origin (within r), and only its component is kept.
/// Throws Error{OriginOutside}, Error{NoLatticeNodeNearOrigin}, Error{InvalidPolygon}.
PolygonGrid build_grid(const PolygonEnv& env);

struct CoverReport {
  bool covered = false;
  bool connected = false;
  double worst_gap = 0.0;
  Point2 worst_point;
  std::size_t samples = 0;
};

/// Samples the interior on a sub-lattice of pitch r / 2^k (2^k >= density, anchored at the
/// plane origin, so denser sampling only adds points) plus every ring vertex, and measures the
/// distance to the nearest grid node.
CoverReport covers_check(const PolygonGrid& g, const PolygonEnv& env, int density = 4);

/// `gridsearch-polygon v1` format. Throws Error{ParseError} or Error{InvalidPolygon}.
PolygonEnv read_polygon(std::istream& in);
void write_polygon(std::ostream& out, const PolygonEnv& env);
PolygonEnv load_polygon(const std::filesystem::path& path);
void save_polygon(const std::filesystem::path& path, const PolygonEnv& env);

}  // namespace gridsearch
