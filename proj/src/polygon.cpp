#include "gridsearch/polygon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "gridsearch/grid_io.hpp"

namespace gridsearch {

namespace {

// Geometric tolerance relative to the pitch.
constexpr double kEps = 1e-9;

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double dist_to_segment(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return dist(p, {a.x + t * dx, a.y + t * dy});
}

int sign(double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); }

// Closed segments [a,b] and [c,d] share a point (within eps).
bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
  const int o1 = sign(cross(a, b, c), eps);
  const int o2 = sign(cross(a, b, d), eps);
  const int o3 = sign(cross(c, d, a), eps);
  const int o4 = sign(cross(c, d, b), eps);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return dist_to_segment(c, a, b) <= eps || dist_to_segment(d, a, b) <= eps || dist_to_segment(a, c, d) <= eps ||
         dist_to_segment(b, c, d) <= eps;
}

double signed_area(const Ring& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2 p = ring[i];
    const Point2 q = ring[(i + 1) % ring.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return a / 2.0;
}

bool crossing_inside(const Ring& ring, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

template <typename F>
void for_each_segment(const PolygonEnv& env, F&& f) {
  auto ring = [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i) f(r[i], r[(i + 1) % r.size()]);
  };
  ring(env.outer);
  for (const Ring& h : env.holes) ring(h);
}

bool ring_simple(const Ring& r, double eps) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point2 a = r[i], b = r[(i + 1) % n], c = r[j], d = r[(j + 1) % n];
      if (adjacent) {
        // Neighbouring edges may only share their common vertex.
        const Point2 far_a = j == i + 1 ? a : b;
        const Point2 far_c = j == i + 1 ? d : c;
        if (dist_to_segment(far_c, a, b) <= eps || dist_to_segment(far_a, c, d) <= eps) return false;
      } else if (segments_touch(a, b, c, d, eps)) {
        return false;
      }
    }
  }
  return true;
}

bool rings_touch(const Ring& p, const Ring& q, double eps) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (segments_touch(p[i], p[(i + 1) % p.size()], q[j], q[(j + 1) % q.size()], eps)) return true;
    }
  }
  return false;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidPolygon, what); }

double eps_for(const PolygonEnv& env) { return kEps * std::max(1.0, env.r); }

long long lattice_floor(double v, double r) { return static_cast<long long>(std::floor(v / r)); }
long long lattice_ceil(double v, double r) { return static_cast<long long>(std::ceil(v / r)); }

}  // namespace

PolygonEnv normalize_polygon(PolygonEnv env) {
  if (!(env.r > 0.0) || !std::isfinite(env.r)) invalid("pitch r must be positive");
  const double eps = eps_for(env);
  auto check = [&](Ring& ring, bool outer) {
    if (ring.size() < 3) invalid("a ring needs at least three vertices");
    for (Point2 p : ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) invalid("non-finite vertex");
    }
    const double area = signed_area(ring);
    if (std::abs(area) <= eps) invalid("ring with zero area");
    if (!ring_simple(ring, eps)) invalid("ring is not simple");
    if ((area > 0) != outer) std::reverse(ring.begin(), ring.end());
  };
  check(env.outer, true);
  for (Ring& h : env.holes) {
    check(h, false);
    if (rings_touch(h, env.outer, eps)) invalid("hole touches the outer ring");
    for (Point2 p : h) {
      if (!crossing_inside(env.outer, p)) invalid("hole outside the outer ring");
    }
  }
  for (std::size_t i = 0; i < env.holes.size(); ++i) {
    for (std::size_t j = i + 1; j < env.holes.size(); ++j) {
      const Ring& a = env.holes[i];
      const Ring& b = env.holes[j];
      if (rings_touch(a, b, eps) || crossing_inside(a, b[0]) || crossing_inside(b, a[0])) invalid("holes overlap");
    }
  }
  return env;
}

bool polygon_contains(const PolygonEnv& env, Point2 p) {
  const double eps = eps_for(env);
  bool on_ring = false;
  for_each_segment(env, [&](Point2 a, Point2 b) { on_ring = on_ring || dist_to_segment(p, a, b) <= eps; });
  if (on_ring || !crossing_inside(env.outer, p)) return false;
  for (const Ring& h : env.holes) {
    if (crossing_inside(h, p)) return false;
  }
  return true;
}

bool segment_hits_boundary(const PolygonEnv& env, Point2 a, Point2 b) {
  const double eps = eps_for(env);
  bool hit = false;
  for_each_segment(env, [&](Point2 c, Point2 d) { hit = hit || segments_touch(a, b, c, d, eps); });
  return hit;
}

PolygonGrid build_grid(const PolygonEnv& raw) {
  const PolygonEnv env = normalize_polygon(raw);
  const double r = env.r;
  if (!polygon_contains(env, env.origin)) throw Error(ErrorCode::OriginOutside, "origin is not strictly inside the polygon");

  double x0 = env.outer[0].x, x1 = x0, y0 = env.outer[0].y, y1 = y0;
  for (Point2 p : env.outer) {
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  const long long span = (lattice_ceil(x1, r) - lattice_floor(x0, r) + 1) * (lattice_ceil(y1, r) - lattice_floor(y0, r) + 1);
  if (span > 50'000'000) invalid("polygon too large for its pitch");

  auto plane = [r](long long i, long long j) { return Point2{static_cast<double>(i) * r, static_cast<double>(j) * r}; };
  std::set<std::pair<long long, long long>> inside;
  for (long long i = lattice_floor(x0, r); i <= lattice_ceil(x1, r); ++i) {
    for (long long j = lattice_floor(y0, r); j <= lattice_ceil(y1, r); ++j) {
      if (polygon_contains(env, plane(i, j))) inside.insert({i, j});
    }
  }

  // Homebase: the nearest inside lattice point to the origin, ties to the smaller index.
  std::optional<std::pair<long long, long long>> home;
  double best = std::numeric_limits<double>::infinity();
  for (long long i = lattice_floor(env.origin.x, r) - 1; i <= lattice_ceil(env.origin.x, r) + 1; ++i) {
    for (long long j = lattice_floor(env.origin.y, r) - 1; j <= lattice_ceil(env.origin.y, r) + 1; ++j) {
      if (!inside.count({i, j})) continue;
      const double d = dist(plane(i, j), env.origin);
      if (d <= r + eps_for(env) && d < best - eps_for(env)) {
        best = d;
        home = {i, j};
      }
    }
  }
  if (!home) throw Error(ErrorCode::NoLatticeNodeNearOrigin, "no lattice point inside the polygon within r of the origin");

  PolygonGrid out;
  out.inside_points = inside.size();
  std::map<std::pair<long long, long long>, std::vector<std::pair<long long, long long>>> adj;
  for (const auto& [i, j] : inside) {
    for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
      const std::pair<long long, long long> q{i + di, j + dj};
      if (!inside.count(q)) continue;
      const Point2 a = plane(i, j);
      const Point2 b = plane(q.first, q.second);
      if (segment_hits_boundary(env, a, b)) continue;
      if (!polygon_contains(env, {(a.x + b.x) / 2, (a.y + b.y) / 2})) continue;
      adj[{i, j}].push_back(q);
      adj[q].push_back({i, j});
      ++out.inside_edges;
    }
  }

  std::map<std::pair<long long, long long>, int> comp;
  std::vector<std::size_t> sizes;
  for (const auto& p : inside) {
    if (comp.count(p)) continue;
    const int id = static_cast<int>(sizes.size());
    std::vector<std::pair<long long, long long>> stack{p};
    comp[p] = id;
    std::size_t size = 0;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& u : adj[v]) {
        if (comp.emplace(u, id).second) stack.push_back(u);
      }
    }
    sizes.push_back(size);
  }
  const int keep = comp.at(*home);
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (static_cast<int>(c) != keep) out.discarded_components.push_back(sizes[c]);
  }
  std::sort(out.discarded_components.rbegin(), out.discarded_components.rend());

  auto coord = [](std::pair<long long, long long> p) {
    if (p.first < std::numeric_limits<int>::min() / 2 || p.first > std::numeric_limits<int>::max() / 2 ||
        p.second < std::numeric_limits<int>::min() / 2 || p.second > std::numeric_limits<int>::max() / 2) {
      invalid("lattice index out of range");
    }
    return Coord{static_cast<int>(p.first), static_cast<int>(p.second)};
  };
  std::vector<Coord> nodes;
  std::vector<std::pair<Coord, Coord>> edges;
  for (const auto& [p, id] : comp) {
    if (id != keep) continue;
    nodes.push_back(coord(p));
    for (const auto& q : adj[p]) {
      if (p < q) edges.push_back({coord(p), coord(q)});
    }
  }
  out.anchor = coord(*home);
  out.grid = validate_grid(std::move(nodes), std::move(edges), out.anchor);
  return out;
}

CoverReport covers_check(const PolygonGrid& g, const PolygonEnv& raw, int density) {
  const PolygonEnv env = normalize_polygon(raw);
  const double r = env.r;
  int steps = 1;
  while (steps < std::max(density, 1)) steps *= 2;
  const double pitch = r / steps;

  std::set<std::pair<long long, long long>> nodes;
  for (Coord c : g.grid.nodes()) nodes.insert({c.x + g.anchor.x, c.y + g.anchor.y});

  CoverReport rep;
  // Grids from validate_grid are connected by construction; recheck from the edge list.
  {
    std::map<Coord, std::vector<Coord>> adj;
    for (const GridEdge& e : g.grid.edges()) {
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
    std::set<Coord> seen{Coord{0, 0}};
    std::vector<Coord> stack{Coord{0, 0}};
    while (!stack.empty()) {
      const Coord v = stack.back();
      stack.pop_back();
      for (Coord u : adj[v]) {
        if (seen.insert(u).second) stack.push_back(u);
      }
    }
    rep.connected = seen.size() == g.grid.node_count();
  }

  auto gap = [&](Point2 p) {
    // Search square shells of lattice points around p until no closer node can exist.
    const long long ci = std::llround(p.x / r);
    const long long cj = std::llround(p.y / r);
    double best = std::numeric_limits<double>::infinity();
    const long long limit = 2 + static_cast<long long>(std::sqrt(static_cast<double>(nodes.size()))) * 4 + 64;
    for (long long k = 0; k <= limit; ++k) {
      if (best <= (static_cast<double>(k) - 0.5) * r) break;
      for (long long i = ci - k; i <= ci + k; ++i) {
        for (long long j = cj - k; j <= cj + k; ++j) {
          if (std::max(std::llabs(i - ci), std::llabs(j - cj)) != k || !nodes.count({i, j})) continue;
          best = std::min(best, dist(p, {static_cast<double>(i) * r, static_cast<double>(j) * r}));
        }
      }
    }
    if (!std::isfinite(best)) {
      for (const auto& [i, j] : nodes) best = std::min(best, dist(p, {static_cast<double>(i) * r, static_cast<double>(j) * r}));
    }
    return best;
  };
  auto sample = [&](Point2 p) {
    ++rep.samples;
    const double d = gap(p);
    if (d > rep.worst_gap) {
      rep.worst_gap = d;
      rep.worst_point = p;
    }
  };

  double x0 = env.outer[0].x, x1 = x0, y0 = env.outer[0].y, y1 = y0;
  for (Point2 p : env.outer) {
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  for (long long i = lattice_floor(x0, pitch); i <= lattice_ceil(x1, pitch); ++i) {
    for (long long j = lattice_floor(y0, pitch); j <= lattice_ceil(y1, pitch); ++j) {
      const Point2 p{static_cast<double>(i) * pitch, static_cast<double>(j) * pitch};
      if (polygon_contains(env, p)) sample(p);
    }
  }
  for_each_segment(env, [&](Point2 a, Point2) { sample(a); });
  rep.covered = rep.connected && rep.worst_gap <= r + eps_for(env);
  return rep;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Ring parse_ring(const std::vector<std::string>& tok, std::size_t line_no) {
  if ((tok.size() - 1) % 2 != 0) detail::parse_fail(line_no, "ring needs coordinate pairs");
  Ring ring;
  for (std::size_t i = 1; i + 1 < tok.size(); i += 2) {
    ring.push_back({detail::parse_double(tok[i], line_no), detail::parse_double(tok[i + 1], line_no)});
  }
  return ring;
}

}  // namespace

PolygonEnv read_polygon(std::istream& in) {
  using detail::parse_fail;
  PolygonEnv env;
  std::string line;
  std::size_t line_no = 0;
  bool header = false, have_r = false, have_origin = false, have_outer = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gridsearch-polygon" || tok[1] != "v1") {
        parse_fail(line_no, "missing 'gridsearch-polygon v1' header");
      }
      header = true;
      continue;
    }
    if (tok[0] == "r" && tok.size() == 2) {
      if (have_r) throw Error(ErrorCode::DuplicateRecord, "line " + std::to_string(line_no) + ": second 'r' record");
      env.r = detail::parse_double(tok[1], line_no);
      have_r = true;
    } else if (tok[0] == "origin" && tok.size() == 3) {
      if (have_origin) throw Error(ErrorCode::DuplicateRecord, "line " + std::to_string(line_no) + ": second origin");
      env.origin = {detail::parse_double(tok[1], line_no), detail::parse_double(tok[2], line_no)};
      have_origin = true;
    } else if (tok[0] == "outer") {
      if (have_outer) throw Error(ErrorCode::DuplicateRecord, "line " + std::to_string(line_no) + ": second outer ring");
      env.outer = parse_ring(tok, line_no);
      have_outer = true;
    } else if (tok[0] == "hole") {
      env.holes.push_back(parse_ring(tok, line_no));
    } else {
      parse_fail(line_no, "unrecognised record '" + tok[0] + "'");
    }
  }
  if (!header) parse_fail(line_no, "empty polygon file");
  if (!have_r || !have_origin || !have_outer) parse_fail(line_no, "polygon needs r, origin and outer records");
  normalize_polygon(env);
  return env;
}

void write_polygon(std::ostream& out, const PolygonEnv& env) {
  out << "gridsearch-polygon v1\n";
  out << "r " << format_double(env.r) << "\n";
  out << "origin " << format_double(env.origin.x) << " " << format_double(env.origin.y) << "\n";
  auto ring = [&](const char* tag, const Ring& r) {
    out << tag;
    for (Point2 p : r) out << " " << format_double(p.x) << " " << format_double(p.y);
    out << "\n";
  };
  ring("outer", env.outer);
  for (const Ring& h : env.holes) ring("hole", h);
}

PolygonEnv load_polygon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return read_polygon(in);
}

void save_polygon(const std::filesystem::path& path, const PolygonEnv& env) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  write_polygon(out, env);
}

}  // namespace gridsearch
