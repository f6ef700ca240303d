#include "gridsearch/harness.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "gridsearch/grid_io.hpp"

namespace gridsearch {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
  // FNV-1a over the stream name, then a splitmix64 finaliser over the mix.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : stream) h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
  std::uint64_t z = seed ^ h ^ (index * 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PartialGrid gen_random(std::uint64_t seed, int width, int height, double keep_prob, int max_retries) {
  if (width < 1 || height < 1) throw Error(ErrorCode::IndexOutOfRange, "width and height must be at least 1");
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) throw Error(ErrorCode::IndexOutOfRange, "keep probability outside [0,1]");
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, "gen-random", static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<Coord, Coord>> edges;
    for (int x = 0; x < width; ++x) {
      for (int y = 0; y < height; ++y) {
        // Draw for both directions in a fixed order so the stream does not depend on p.
        const bool right = u(rng) < keep_prob;
        const bool up = u(rng) < keep_prob;
        if (x + 1 < width && right) edges.push_back({{x, y}, {x + 1, y}});
        if (y + 1 < height && up) edges.push_back({{x, y}, {x, y + 1}});
      }
    }
    std::map<Coord, std::vector<Coord>> adj;
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::set<Coord> comp{{0, 0}};
    std::vector<Coord> stack{{0, 0}};
    while (!stack.empty()) {
      const Coord v = stack.back();
      stack.pop_back();
      for (Coord w : adj[v]) {
        if (comp.insert(w).second) stack.push_back(w);
      }
    }
    if (comp.size() == 1 && static_cast<long long>(width) * height > 1) continue;
    std::vector<std::pair<Coord, Coord>> kept;
    for (const auto& e : edges) {
      if (comp.count(e.first)) kept.push_back(e);
    }
    return validate_grid({comp.begin(), comp.end()}, std::move(kept), {0, 0});
  }
  throw Error(ErrorCode::EmptyComponent,
              "origin stayed isolated after " + std::to_string(max_retries + 1) + " attempts");
}

const std::vector<std::string> kMetricsColumns{
    "kind",  "n_nodes", "side",  "peak_total",       "peak_guards", "peak_cleaners", "peak_explorers",
    "bound", "phases",  "steps", "moves",            "lemma_suite_pass", "l",        "peak",
    "lower_bound", "oracle_mcs", "rounds"};

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

MetricsRow engine_row(const PartialGrid& grid, const SearchOutcome& run, std::optional<bool> lemma_pass) {
  MetricsRow r;
  r.kind = "engine";
  r.n_nodes = grid.node_count();
  r.side = run.side;
  r.peak_total = run.peak_total;
  r.peak_guards = run.peak_guards;
  r.peak_cleaners = run.peak_cleaners;
  r.peak_explorers = run.peak_explorers;
  r.bound = static_cast<double>(engine_peak_bound(run.side, run.strip));
  r.phases = run.phases.size();
  r.steps = run.steps.size();
  r.moves = run.trace.moves.size();
  r.lemma_suite_pass = lemma_pass;
  return r;
}

MetricsRow greedy_row(const PartialGrid& grid, int peak, std::size_t moves) {
  MetricsRow r;
  r.kind = "greedy";
  r.n_nodes = grid.node_count();
  r.peak_total = peak;
  r.moves = moves;
  return r;
}

MetricsRow unknown_row(const PartialGrid& grid, const UnknownSizeOutcome& run) {
  MetricsRow r;
  r.kind = "unknown";
  r.n_nodes = grid.node_count();
  r.side = run.final_run.side;
  r.peak_total = run.total_searchers;
  r.bound = unknown_size_bound(run.c, static_cast<long long>(grid.node_count()));
  r.phases = run.final_run.phases.size();
  r.steps = run.final_run.steps.size();
  std::size_t moves = 0;
  for (const RoundRecord& rr : run.rounds) moves += rr.moves;
  r.moves = moves;
  r.rounds = run.rounds.size();
  return r;
}

MetricsRow attack_row(const AttackResult& run, std::optional<int> oracle_mcs) {
  MetricsRow r;
  r.kind = std::string("attack-") + to_string(run.algorithm);
  r.n_nodes = run.tree.node_count();
  r.side = run.side;
  r.peak_total = run.peak;
  r.moves = run.trace.moves.size();
  if (run.algorithm == AttackAlgorithm::Engine) {
    r.bound = static_cast<double>(engine_peak_bound(run.side));
    r.lemma_suite_pass = run.lemma_suite_pass;
  }
  r.l = run.l;
  r.peak = run.peak;
  r.lower_bound = run.lower_bound();
  r.oracle_mcs = oracle_mcs;
  return r;
}

MetricsRow ratio_row(AttackAlgorithm algorithm, const RatioRecord& rec) {
  MetricsRow r;
  r.kind = std::string("ratio-") + to_string(algorithm);
  r.n_nodes = rec.n;
  r.l = rec.l;
  r.peak = rec.peak;
  r.lower_bound = (rec.l + 1) / 2.0;
  r.oracle_mcs = rec.mcs;
  return r;
}

namespace {

template <typename T>
std::string cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else if constexpr (std::is_same_v<T, double>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
void parse_cell(const std::string& s, std::optional<T>& out, std::size_t line_no) {
  if (s.empty()) {
    out.reset();
    return;
  }
  if constexpr (std::is_same_v<T, bool>) {
    if (s != "0" && s != "1") detail::parse_fail(line_no, "expected 0 or 1, got '" + s + "'");
    out = s == "1";
  } else if constexpr (std::is_same_v<T, double>) {
    out = detail::parse_double(s, line_no);
  } else {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      detail::parse_fail(line_no, "expected integer, got '" + s + "'");
    }
    out = v;
  }
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  for (std::size_t i = 0; i < kMetricsColumns.size(); ++i) out << (i ? "," : "") << kMetricsColumns[i];
  out << "\n";
  for (const MetricsRow& r : rows) {
    out << r.kind << ',' << cell(r.n_nodes) << ',' << cell(r.side) << ',' << cell(r.peak_total) << ','
        << cell(r.peak_guards) << ',' << cell(r.peak_cleaners) << ',' << cell(r.peak_explorers) << ','
        << cell(r.bound) << ',' << cell(r.phases) << ',' << cell(r.steps) << ',' << cell(r.moves) << ','
        << cell(r.lemma_suite_pass) << ',' << cell(r.l) << ',' << cell(r.peak) << ',' << cell(r.lower_bound)
        << ',' << cell(r.oracle_mcs) << ',' << cell(r.rounds) << "\n";
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) detail::parse_fail(1, "empty metrics file");
  ++line_no;
  if (split_csv(line) != kMetricsColumns) detail::parse_fail(line_no, "unexpected metrics header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto c = split_csv(line);
    if (c.size() != kMetricsColumns.size()) detail::parse_fail(line_no, "wrong number of cells");
    MetricsRow r;
    r.kind = c[0];
    parse_cell(c[1], r.n_nodes, line_no);
    parse_cell(c[2], r.side, line_no);
    parse_cell(c[3], r.peak_total, line_no);
    parse_cell(c[4], r.peak_guards, line_no);
    parse_cell(c[5], r.peak_cleaners, line_no);
    parse_cell(c[6], r.peak_explorers, line_no);
    parse_cell(c[7], r.bound, line_no);
    parse_cell(c[8], r.phases, line_no);
    parse_cell(c[9], r.steps, line_no);
    parse_cell(c[10], r.moves, line_no);
    parse_cell(c[11], r.lemma_suite_pass, line_no);
    parse_cell(c[12], r.l, line_no);
    parse_cell(c[13], r.peak, line_no);
    parse_cell(c[14], r.lower_bound, line_no);
    parse_cell(c[15], r.oracle_mcs, line_no);
    parse_cell(c[16], r.rounds, line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

const std::vector<std::string> kStripColumns{"frontier_anchor", "orientation", "depth_i", "peak_cleaners", "bound",
                                             "explorers"};

void write_strip_csv(std::ostream& out, const std::vector<StripRecord>& strips) {
  for (std::size_t i = 0; i < kStripColumns.size(); ++i) out << (i ? "," : "") << kStripColumns[i];
  out << "\n";
  for (const StripRecord& s : strips) {
    const Coord a = s.frontier.anchor();
    out << a.x << ' ' << a.y << ','
        << (s.frontier.orientation() == Orientation::Horizontal ? "horizontal" : "vertical") << ',' << s.depth << ','
        << s.peak_cleaners << ',' << s.bound << ',' << s.explorers << "\n";
  }
}

Calibration calibrate(const std::vector<StripRecord>& strips, StripConstants c) {
  Calibration cal;
  cal.strips = strips.size();
  cal.max_excess = std::numeric_limits<long long>::min();
  cal.fitted_b = std::numeric_limits<int>::min();
  for (const StripRecord& s : strips) {
    cal.max_excess = std::max(cal.max_excess, s.peak_cleaners - strip_peak_bound(s.depth, c));
    auto& p = cal.peak_by_depth[s.depth];
    p = std::max(p, s.peak_cleaners);
    cal.fitted_b = std::max(cal.fitted_b, s.peak_cleaners - c.a * s.depth);
  }
  if (strips.empty()) {
    cal.max_excess = 0;
    cal.fitted_b = 0;
  }
  return cal;
}

int RunConfig::side_for(std::size_t n) const {
  if (side) return *side;
  if (size_bound) return side_for_bound(*size_bound);
  return side_for_bound(static_cast<long long>(n));
}

std::vector<SuiteRun> run_random_suite(const RunConfig& cfg, int runs, int max_side) {
  if (runs < 0 || max_side < 1) throw Error(ErrorCode::IndexOutOfRange, "suite needs runs >= 0 and max_side >= 1");
  std::vector<SuiteRun> out;
  out.reserve(static_cast<std::size_t>(runs));
  for (int k = 0; k < runs; ++k) {
    std::mt19937_64 rng(derive_seed(cfg.seed, "suite", static_cast<std::uint64_t>(k)));
    std::uniform_int_distribution<int> dim(1, max_side);
    std::uniform_real_distribution<double> prob(0.55, 1.0);
    SuiteRun r;
    r.width = dim(rng);
    r.height = dim(rng);
    r.keep_prob = prob(rng);
    r.seed = rng();
    r.grid = gen_random(r.seed, r.width, r.height, r.keep_prob);
    EngineConfig ec;
    ec.side = cfg.side_for(r.grid.node_count());
    ec.strip = cfg.strip;
    r.outcome = grid_searching(r.grid, ec);
    r.verification = verify_trace(r.grid, r.outcome.trace);
    if (cfg.check_lemmas) r.lemmas = assert_lemma_suite(r.outcome);
    r.row = engine_row(r.grid, r.outcome, cfg.check_lemmas ? std::optional<bool>(r.lemmas.all_pass()) : std::nullopt);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gridsearch
