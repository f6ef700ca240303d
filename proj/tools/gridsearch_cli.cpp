#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridsearch/adversary.hpp"
#include "gridsearch/baseline.hpp"
#include "gridsearch/engine.hpp"
#include "gridsearch/grid_io.hpp"
#include "gridsearch/harness.hpp"
#include "gridsearch/oracle.hpp"
#include "gridsearch/polygon.hpp"

using namespace gridsearch;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

// Writes to a file, or to stdout for "-".
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) return;
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  write(out);
  if (!out) throw Error(ErrorCode::ParseError, "write failed for " + path);
}

StrategyTrace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_trace(in);
}

std::vector<MetricsRow> load_metrics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_metrics_csv(in);
}

AttackAlgorithm parse_algorithm(const std::string& name) {
  return name == "greedy" ? AttackAlgorithm::Greedy : AttackAlgorithm::Engine;
}

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::AlgorithmStalled:
    case ErrorCode::InvariantViolation:
    case ErrorCode::IllegalMove:
    case ErrorCode::NoCleanPath:
    case ErrorCode::OracleTimeout:
    case ErrorCode::StateSpaceExceeded:
      return false;
    default:
      return true;
  }
}

void print_report(const VerificationReport& v) {
  std::cout << "legal=" << v.legal << " monotone=" << v.monotone << " connected=" << v.connected
            << " complete=" << v.complete << " peak=" << v.peak_searchers << " moves=" << v.moves_replayed << "\n";
  for (const VerificationFailure& f : v.failures) {
    std::cout << "  " << f.kind << " at move " << f.move_index << ": " << f.detail << "\n";
  }
}

void print_calibration(std::ostream& os, const Calibration& cal, StripConstants c) {
  os << "strip calls: " << cal.strips << "\n";
  if (cal.strips == 0) return;
  os << "max peak - (" << c.a << "i + " << c.b << "): " << cal.max_excess << "\n";
  os << "smallest b for a = " << c.a << ": " << cal.fitted_b << "\n";
  for (const auto& [i, p] : cal.peak_by_depth) os << "  i=" << i << " peak=" << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone connected searching of partial grids"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_path, trace_path, csv_path, strips_path, out_path, polygon_path, algorithm = "engine";
  int width = 0, height = 0, retries = 16, l = 0, k_max = 16, density = 4, suite_runs = 0, max_side = 60;
  double prob = 1.0, time_limit = 0.0;
  long long budget = Crew::kUnlimited;
  std::size_t edge_cap = 16;
  bool mirrored_tree = false, with_oracle = false, near_first = false, no_lemmas = false, no_bound = false;
  bool allow_uncovered = false;

  auto add_strip = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.strip.a, "Strip slope constant")->capture_default_str();
    sub->add_option("--b", cfg.strip.b, "Strip offset constant")->capture_default_str();
  };

  CLI::App* gen_random_cmd = app.add_subcommand("gen-random", "Random partial grid from a seed");
  gen_random_cmd->add_option("--seed", cfg.seed, "RNG seed")->required();
  gen_random_cmd->add_option("--width", width, "Lattice width")->required()->check(CLI::PositiveNumber);
  gen_random_cmd->add_option("--height", height, "Lattice height")->required()->check(CLI::PositiveNumber);
  gen_random_cmd->add_option("--prob", prob, "Edge keep probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_random_cmd->add_option("--retries", retries, "Retries when the origin is isolated")->capture_default_str();
  gen_random_cmd->add_option("--out", out_path, "Grid file, - for stdout")->required();

  CLI::App* gen_adv_cmd = app.add_subcommand("gen-adversary", "Tree built by the adaptive adversary");
  gen_adv_cmd->add_option("--l", l, "Tree depth")->required()->check(CLI::PositiveNumber);
  gen_adv_cmd->add_option("--algorithm", algorithm, "engine or greedy")
      ->check(CLI::IsMember({"engine", "greedy"}))
      ->capture_default_str();
  gen_adv_cmd->add_flag("--mirrored", mirrored_tree, "Add the point-reflected copy");
  gen_adv_cmd->add_option("--out", out_path, "Grid file, - for stdout")->required();
  gen_adv_cmd->add_option("--trace", trace_path, "Trace of the attacked run");

  CLI::App* poly_cmd = app.add_subcommand("from-polygon", "Lattice grid inside a polygon");
  poly_cmd->add_option("--polygon", polygon_path, "Polygon file")->required();
  poly_cmd->add_option("--out", out_path, "Grid file, - for stdout")->required();
  poly_cmd->add_option("--density", density, "Cover sampling density")->capture_default_str();
  poly_cmd->add_flag("--allow-uncovered", allow_uncovered, "Exit 0 even when the grid misses part of the polygon");

  CLI::App* run_cmd = app.add_subcommand("run", "Search a grid with a known size bound");
  run_cmd->add_option("--grid", grid_path, "Grid file")->required();
  auto* side_opt = run_cmd->add_option("--side", cfg.side, "Frontier side s");
  run_cmd->add_option("--n", cfg.size_bound, "Size bound n (side = ceil(sqrt(n)))")->excludes(side_opt);
  run_cmd->add_option("--budget", budget, "Searcher budget");
  run_cmd->add_option("--algorithm", algorithm, "engine or greedy")
      ->check(CLI::IsMember({"engine", "greedy"}))
      ->capture_default_str();
  run_cmd->add_flag("--near-side-first", near_first, "Sweep strips from the frontier side");
  run_cmd->add_flag("--no-lemmas", no_lemmas, "Skip the lemma suite");
  run_cmd->add_flag("--no-bound-check", no_bound, "Do not fail when the peak exceeds the bound");
  run_cmd->add_option("--trace", trace_path, "Trace output");
  run_cmd->add_option("--csv", csv_path, "Metrics CSV output");
  run_cmd->add_option("--strips", strips_path, "Strip CSV output");
  add_strip(run_cmd);

  CLI::App* unknown_cmd = app.add_subcommand("run-unknown", "Search a grid of unknown size by doubling");
  unknown_cmd->add_option("--grid", grid_path, "Grid file")->required();
  unknown_cmd->add_option("--c", cfg.c, "Team size constant")->capture_default_str();
  unknown_cmd->add_option("--trace", trace_path, "Trace of the final round");
  unknown_cmd->add_option("--csv", csv_path, "Metrics CSV output");
  add_strip(unknown_cmd);

  CLI::App* attack_cmd = app.add_subcommand("attack", "Run an algorithm against the adaptive adversary");
  attack_cmd->add_option("--l", l, "Tree depth")->required()->check(CLI::PositiveNumber);
  attack_cmd->add_option("--algorithm", algorithm, "engine or greedy")
      ->check(CLI::IsMember({"engine", "greedy"}))
      ->capture_default_str();
  attack_cmd->add_flag("--oracle", with_oracle, "Also compute the exact search number of the tree");
  attack_cmd->add_option("--edge-cap", edge_cap, "Oracle edge cap")->capture_default_str();
  attack_cmd->add_option("--trace", trace_path, "Trace output");
  attack_cmd->add_option("--csv", csv_path, "Metrics CSV output");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Replay a trace on a grid");
  verify_cmd->add_option("--grid", grid_path, "Grid file")->required();
  verify_cmd->add_option("--trace", trace_path, "Trace file")->required();

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact monotone connected search number");
  oracle_cmd->add_option("--grid", grid_path, "Grid file")->required();
  oracle_cmd->add_option("--k-max", k_max, "Largest team tried")->capture_default_str();
  oracle_cmd->add_option("--edge-cap", edge_cap, "Largest edge count accepted")->capture_default_str();
  oracle_cmd->add_option("--time-limit", time_limit, "Seconds, 0 for none")->capture_default_str();

  CLI::App* stats_cmd = app.add_subcommand("stats", "Merge metrics CSVs or run a seeded suite");
  stats_cmd->add_option("--in", cfg.inputs, "Metrics CSV files to merge");
  stats_cmd->add_option("--suite", suite_runs, "Number of random grids to run");
  stats_cmd->add_option("--seed", cfg.seed, "Suite seed")->capture_default_str();
  stats_cmd->add_option("--max-side", max_side, "Largest lattice side in the suite")->capture_default_str();
  stats_cmd->add_option("--out", out_path, "Metrics CSV output, - for stdout")->capture_default_str();
  stats_cmd->add_option("--strips", strips_path, "Strip CSV output for the suite");
  stats_cmd->add_flag("--no-lemmas", no_lemmas, "Skip the lemma suite");
  add_strip(stats_cmd);
  out_path = "-";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  cfg.check_lemmas = !no_lemmas;
  cfg.check_bound = !no_bound;

  try {
    if (*gen_random_cmd) {
      cfg.verb = "gen-random";
      const PartialGrid g = gen_random(cfg.seed, width, height, prob, retries);
      emit(out_path, [&](std::ostream& os) { write_grid(os, g); });
      return kOk;
    }

    if (*gen_adv_cmd) {
      cfg.verb = "gen-adversary";
      const AttackResult r = adaptive_adversary(parse_algorithm(algorithm), l);
      const PartialGrid g = mirrored_tree ? mirrored(r.tree) : r.tree.grid();
      emit(out_path, [&](std::ostream& os) { write_grid(os, g); });
      emit(trace_path, [&](std::ostream& os) { write_trace(os, r.trace); });
      return r.consistent ? kOk : kFailed;
    }

    if (*poly_cmd) {
      cfg.verb = "from-polygon";
      const PolygonEnv env = load_polygon(polygon_path);
      const PolygonGrid pg = build_grid(env);
      const CoverReport c = covers_check(pg, env, density);
      emit(out_path, [&](std::ostream& os) { write_grid(os, pg.grid); });
      std::ostream& log = out_path == "-" ? std::cerr : std::cout;
      log << "nodes=" << pg.grid.node_count() << " edges=" << pg.grid.edge_count() << " anchor=" << pg.anchor
          << " discarded_components=" << pg.discarded_components.size() << "\n";
      log << "covered=" << c.covered << " connected=" << c.connected << " worst_gap=" << format_number(c.worst_gap)
          << " at (" << format_number(c.worst_point.x) << ", " << format_number(c.worst_point.y) << ")\n";
      return c.covered || allow_uncovered ? kOk : kFailed;
    }

    if (*run_cmd) {
      cfg.verb = "run";
      const PartialGrid g = load_grid(grid_path);
      if (algorithm == "greedy") {
        const BaselineOutcome b = greedy_search(g);
        const VerificationReport v = verify_trace(g, b.trace);
        print_report(v);
        emit(trace_path, [&](std::ostream& os) { write_trace(os, b.trace); });
        emit(csv_path, [&](std::ostream& os) { write_metrics_csv(os, {greedy_row(g, b.peak, b.trace.moves.size())}); });
        return v.ok() ? kOk : kFailed;
      }
      EngineConfig ec;
      ec.side = cfg.side_for(g.node_count());
      ec.budget = budget;
      ec.strip = cfg.strip;
      ec.order = near_first ? SweepOrder::NearSideFirst : SweepOrder::FarSideFirst;
      const SearchOutcome run = grid_searching(g, ec);
      const VerificationReport v = verify_trace(g, run.trace);
      std::optional<LemmaReport> lemmas;
      if (cfg.check_lemmas) lemmas = assert_lemma_suite(run);
      const long long bound = engine_peak_bound(run.side, run.strip);
      print_report(v);
      std::cout << "side=" << run.side << " peak=" << run.peak_total << " bound=" << bound
                << " guards=" << run.peak_guards << " cleaners=" << run.peak_cleaners
                << " explorers=" << run.peak_explorers << " phases=" << run.phases.size()
                << " steps=" << run.steps.size() << "\n";
      bool pass = v.ok() && run.violations.empty();
      if (lemmas) {
        for (const LemmaResult& r : lemmas->results) {
          if (!r.pass) std::cout << "lemma " << r.name << " failed: " << r.counterexample << "\n";
        }
        pass = pass && lemmas->all_pass();
      }
      if (cfg.check_bound && run.peak_total > bound) {
        std::cout << "peak exceeds bound\n";
        pass = false;
      }
      emit(trace_path, [&](std::ostream& os) { write_trace(os, run.trace); });
      emit(csv_path, [&](std::ostream& os) {
        write_metrics_csv(os, {engine_row(g, run, lemmas ? std::optional<bool>(lemmas->all_pass()) : std::nullopt)});
      });
      emit(strips_path, [&](std::ostream& os) { write_strip_csv(os, run.strips); });
      return pass ? kOk : kFailed;
    }

    if (*unknown_cmd) {
      cfg.verb = "run-unknown";
      const PartialGrid g = load_grid(grid_path);
      UnknownSizeConfig uc;
      uc.c = cfg.c;
      uc.strip = cfg.strip;
      const UnknownSizeOutcome run = mod_grid_searching(g, uc);
      const long long n = static_cast<long long>(g.node_count());
      const double bound = unknown_size_bound(cfg.c, n);
      const std::size_t max_rounds = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log2(n))));
      for (const RoundRecord& r : run.rounds) {
        std::cout << "round " << r.round << " side=" << r.side << " budget=" << r.budget << " success=" << r.success
                  << " searchers=" << r.searchers << " moves=" << r.moves << "\n";
      }
      const VerificationReport v = verify_trace(g, run.final_run.trace);
      print_report(v);
      std::cout << "total=" << run.total_searchers << " bound=" << format_number(bound) << "\n";
      emit(trace_path, [&](std::ostream& os) { write_trace(os, run.final_run.trace); });
      emit(csv_path, [&](std::ostream& os) { write_metrics_csv(os, {unknown_row(g, run)}); });
      const bool pass = v.ok() && run.rounds.size() <= max_rounds && static_cast<double>(run.total_searchers) < bound;
      return pass ? kOk : kFailed;
    }

    if (*attack_cmd) {
      cfg.verb = "attack";
      const AttackResult r = adaptive_adversary(parse_algorithm(algorithm), l);
      std::optional<int> mcs;
      if (with_oracle) {
        OracleConfig oc;
        oc.edge_cap = edge_cap;
        mcs = mcs_exact(r.tree.grid(), r.peak, oc);
      }
      print_report(r.verification);
      std::cout << "l=" << r.l << " nodes=" << r.tree.node_count() << " peak=" << r.peak
                << " lower_bound=" << format_number(r.lower_bound()) << " consistent=" << r.consistent;
      if (mcs) std::cout << " mcs=" << *mcs;
      std::cout << "\n";
      emit(trace_path, [&](std::ostream& os) { write_trace(os, r.trace); });
      emit(csv_path, [&](std::ostream& os) { write_metrics_csv(os, {attack_row(r, mcs)}); });
      const bool pass = r.verification.ok() && r.consistent && r.peak >= r.lower_bound() &&
                        (r.algorithm == AttackAlgorithm::Greedy || r.lemma_suite_pass);
      return pass ? kOk : kFailed;
    }

    if (*verify_cmd) {
      cfg.verb = "verify";
      const PartialGrid g = load_grid(grid_path);
      const VerificationReport v = verify_trace(g, load_trace(trace_path));
      print_report(v);
      return v.ok() ? kOk : kFailed;
    }

    if (*oracle_cmd) {
      cfg.verb = "oracle";
      const PartialGrid g = load_grid(grid_path);
      OracleConfig oc;
      oc.edge_cap = edge_cap;
      oc.time_limit = time_limit;
      const std::optional<int> mcs = mcs_exact(g, g.homebase(), k_max, oc);
      if (mcs) {
        std::cout << "mcs=" << *mcs << "\n";
      } else {
        std::cout << "mcs>" << k_max << "\n";
      }
      return kOk;
    }

    if (*stats_cmd) {
      cfg.verb = "stats";
      std::vector<MetricsRow> rows;
      for (const std::string& path : cfg.inputs) {
        for (MetricsRow& r : load_metrics(path)) rows.push_back(std::move(r));
      }
      bool pass = true;
      if (suite_runs > 0) {
        const std::vector<SuiteRun> suite = run_random_suite(cfg, suite_runs, max_side);
        std::vector<StripRecord> strips;
        for (const SuiteRun& s : suite) {
          rows.push_back(s.row);
          strips.insert(strips.end(), s.outcome.strips.begin(), s.outcome.strips.end());
          pass = pass && s.verification.ok() && (!cfg.check_lemmas || s.lemmas.all_pass());
        }
        emit(strips_path, [&](std::ostream& os) { write_strip_csv(os, strips); });
        print_calibration(std::cerr, calibrate(strips, cfg.strip), cfg.strip);
      }
      emit(out_path, [&](std::ostream& os) { write_metrics_csv(os, rows); });
      return pass ? kOk : kFailed;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return is_input_error(e.code()) ? kInputError : kFailed;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
