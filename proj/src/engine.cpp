#include "gridsearch/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace gridsearch {

long long engine_peak_bound(int side, StripConstants c) {
  return static_cast<long long>(40 + c.a) * side + c.b;
}

bool LemmaReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const LemmaResult& r) { return r.pass; });
}

const LemmaResult* LemmaReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::vector<Coord> initialize(Crew& crew, int side) {
  SearchState& st = crew.state();
  const ExploredView& view = crew.view();
  const SearchState::NodeId h = st.homebase_id();
  crew.post_guard(crew.acquire_at(h));
  std::vector<Coord> nodes{st.coord(h)};
  SearchState::NodeId cur = h;
  // The homebase is the anchor of its frontier, so the component extends to the right only.
  while (st.coord(cur).x < side && (view.ports(cur) & port_bit(Direction::Right)) != 0) {
    const SearchState::NodeId next = view.neighbor(cur, Direction::Right);
    const int s = crew.acquire_at(cur);
    crew.slide(s, next);
    crew.post_guard(s);
    nodes.push_back(st.coord(next));
    cur = next;
  }
  for (Coord c : nodes) crew.release_if_unneeded(st.id_of(c));
  return nodes;
}

int select_active(const std::map<int, std::size_t>& weights) {
  if (weights.empty()) throw Error(ErrorCode::EmptyCollection, "no checkpoint to expand");
  int best = weights.begin()->first;
  std::size_t best_w = weights.begin()->second;
  for (const auto& [id, w] : weights) {
    if (w > best_w) {
      best = id;
      best_w = w;
    }
  }
  return best;
}

namespace {

class Engine {
 public:
  Engine(World& world, const EngineConfig& cfg) : crew_(world, cfg.budget), cfg_(cfg) {
    if (cfg.side < 1) throw Error(ErrorCode::IndexOutOfRange, "side must be positive");
    crew_.set_move_cap(cfg.move_cap);
    out_.side = cfg.side;
    out_.strip = cfg.strip;
  }

  SearchOutcome run() {
    try {
      search();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded || cfg_.throw_on_budget) throw;
      out_.aborted = true;
    }
    out_.trace = crew_.take_trace();
    out_.peak_total = out_.trace.k;
    out_.nodes_visited = crew_.state().visited_count();
    out_.view_queries = crew_.view().query_count();
    return std::move(out_);
  }

 private:
  using NodeId = SearchState::NodeId;

  const SearchState& st() const { return crew_.state(); }

  void search() {
    const int s = cfg_.side;
    auto c0 = initialize(crew_, s);
    Checkpoint first(next_id_++, Frontier({0, 0}, Orientation::Horizontal, s), c0);
    CheckpointInfo info;
    info.id = first.id;
    info.frontier = first.frontier;
    info.seeds = first.seed_nodes;
    info.explored = st().visited_count();
    out_.checkpoints.push_back(info);
    owned_[first.id];
    for (Coord c : c0) {
      if (crew_.guard_required(st().id_of(c))) assign(c, first.id);
    }

    while (!st().all_clean()) {
      if (owned_.empty()) throw Error(ErrorCode::AlgorithmStalled, "no checkpoints left on an unclean network");
      PhaseRecord phase;
      phase.index = static_cast<int>(out_.phases.size());
      phase.first_step = step_;
      crew_.annotate("phase", phase.index);
      int upgrade = -1;
      while (!st().all_clean() && !owned_.empty()) {
        purge();
        auto w = weights();
        check_partition();
        out_.weights.push_back(w);
        const int active = select_active(w);
        expand(active, phase.index, w);
        phase.active_at_end = active;
        if (out_.checkpoints[static_cast<std::size_t>(active)].expansions_done == s) {
          upgrade = active;
          break;
        }
      }
      phase.last_step = step_ - 1;
      if (upgrade != -1) {
        phase.upgraded = true;
        upgrade_checkpoints(upgrade, phase);
      }
      out_.phases.push_back(std::move(phase));
    }
    purge();
    out_.weights.push_back(weights());
    check_partition();
  }

  void assign(Coord c, int id) {
    auto it = owner_.find(c);
    if (it != owner_.end()) {
      auto prev = owned_.find(it->second);
      if (prev != owned_.end()) prev->second.erase(c);
    }
    owner_[c] = id;
    owned_[id].insert(c);
  }

  void purge() {
    for (auto& [id, set] : owned_) {
      for (auto it = set.begin(); it != set.end();) {
        if (!crew_.guard_required(st().id_of(*it))) {
          owner_.erase(*it);
          it = set.erase(it);
        } else {
          ++it;
        }
      }
    }
  }

  std::map<int, std::size_t> weights() const {
    std::map<int, std::size_t> w;
    for (const auto& [id, set] : owned_) w[id] = set.size();
    return w;
  }

  void check_partition() {
    std::size_t total = 0;
    for (const auto& [id, set] : owned_) total += set.size();
    if (total != crew_.guarded_count()) {
      std::ostringstream os;
      os << "step " << step_ << ": " << crew_.guarded_count() << " guarded nodes but " << total << " owned";
      out_.violations.push_back(os.str());
    }
  }

  void expand(int id, int phase, const std::map<int, std::size_t>& w) {
    CheckpointInfo& info = out_.checkpoints[static_cast<std::size_t>(id)];
    const int depth = info.expansions_done + 1;
    const Frontier f = info.frontier;
    const Box region = rectangle_box(f, depth);
    StepRecord rec;
    rec.step = step_;
    rec.phase = phase;
    rec.active = id;
    rec.depth = depth;
    for (const auto& [cid, cw] : w) rec.guards_at_start += cw;
    out_.peak_guards = std::max(out_.peak_guards, rec.guards_at_start);
    crew_.annotate("step", step_);
    const std::size_t visited_before = st().visited_count();

    std::vector<Coord> swept;
    for (;;) {
      std::optional<Coord> start;
      for (Coord c : owned_[id]) {
        const NodeId v = st().id_of(c);
        if (!crew_.guard_required(v)) continue;
        const std::uint8_t ports = crew_.view().ports(v);
        for (Direction d : kDirections) {
          if ((ports & port_bit(d)) == 0 || crew_.view().edge_clean(v, d)) continue;
          if (region.contains(c + offset(d))) {
            start = c;
            break;
          }
        }
        if (start) break;
      }
      if (!start) break;
      StripTask task{*start, f, depth, strip_peak_bound(depth, cfg_.strip), cfg_.order};
      const StripReport rep = clean_expansion_component(crew_, task);
      ++rec.strips;
      out_.strips.push_back({step_, f, depth, rep.peak_cleaners, task.cleaner_budget, rep.explorers_placed,
                             rep.cleared_nodes.size()});
      out_.peak_cleaners = std::max(out_.peak_cleaners, rep.peak_cleaners);
      out_.peak_explorers = std::max(out_.peak_explorers, rep.explorers_placed);
      swept.insert(swept.end(), rep.cleared_nodes.begin(), rep.cleared_nodes.end());
    }
    for (Coord c : swept) {
      if (crew_.guard_required(st().id_of(c))) assign(c, id);
    }
    info.expansions_done = depth;
    rec.explored = st().visited_count() - visited_before;
    info.explored += rec.explored;
    rec.peak_in_use = crew_.size();
    out_.steps.push_back(rec);
    ++step_;
  }

  void upgrade_checkpoints(int id, PhaseRecord& phase) {
    purge();
    CheckpointInfo& gone = out_.checkpoints[static_cast<std::size_t>(id)];
    gone.retired_in_phase = phase.index;
    phase.died.push_back(id);
    const Frontier f = gone.frontier;

    std::vector<Coord> guarded;
    for (const auto& [cid, set] : owned_) guarded.insert(guarded.end(), set.begin(), set.end());
    std::sort(guarded.begin(), guarded.end());
    owned_.erase(id);

    std::set<Coord> claimed;
    std::vector<std::pair<Frontier, std::vector<Coord>>> fresh;
    for (const Frontier& g : frontiers_on_rectangle(f)) {
      std::vector<Coord> nodes;
      for (Coord c : guarded) {
        if (g.contains(c) && claimed.insert(c).second) nodes.push_back(c);
      }
      if (!nodes.empty()) fresh.emplace_back(g, std::move(nodes));
    }

    for (auto& [g, nodes] : fresh) {
      CheckpointInfo info;
      info.id = next_id_++;
      info.frontier = g;
      info.added_in_phase = phase.index;
      std::vector<Coord> owned_nodes = nodes;
      std::vector<Coord> seeds = nodes;
      for (auto it = owned_.begin(); it != owned_.end(); ++it) {
        CheckpointInfo& other = out_.checkpoints[static_cast<std::size_t>(it->first)];
        if (other.frontier != g || other.expansions_done != 0) continue;
        // Merging yields a fresh checkpoint; the absorbed one retires.
        seeds.insert(seeds.end(), other.seeds.begin(), other.seeds.end());
        owned_nodes.insert(owned_nodes.end(), it->second.begin(), it->second.end());
        other.retired_in_phase = phase.index;
        info.merged_from.push_back(other.id);
        phase.died.push_back(other.id);
        owned_.erase(it);
        break;
      }
      const Checkpoint made(info.id, g, seeds);
      info.seeds = made.seed_nodes;
      out_.checkpoints.push_back(info);
      owned_[info.id];
      for (Coord c : owned_nodes) assign(c, info.id);
      phase.born.push_back(info.id);
    }

    for (auto it = owned_.begin(); it != owned_.end();) {
      if (it->second.empty()) {
        out_.checkpoints[static_cast<std::size_t>(it->first)].retired_in_phase = phase.index;
        phase.died.push_back(it->first);
        it = owned_.erase(it);
      } else {
        ++it;
      }
    }
    // Anything still guarded but owned by a removed checkpoint is an orphan.
    for (auto it = owner_.begin(); it != owner_.end();) {
      if (!owned_.count(it->second)) {
        std::ostringstream os;
        os << "phase " << phase.index << ": guarded node " << it->first << " lost its owner";
        out_.violations.push_back(os.str());
        it = owner_.erase(it);
      } else {
        ++it;
      }
    }
  }

  Crew crew_;
  EngineConfig cfg_;
  SearchOutcome out_;
  std::map<int, std::set<Coord>> owned_;
  std::map<Coord, int> owner_;
  int next_id_ = 0;
  long long step_ = 0;
};

}  // namespace

SearchOutcome grid_searching(World& world, const EngineConfig& config) {
  Engine engine(world, config);
  return engine.run();
}

SearchOutcome grid_searching(const PartialGrid& grid, const EngineConfig& config) {
  GridWorld world(grid);
  return grid_searching(world, config);
}

namespace {

std::size_t weight_at(const std::vector<std::map<int, std::size_t>>& w, std::size_t t, int id) {
  if (t >= w.size()) return 0;
  auto it = w[t].find(id);
  return it == w[t].end() ? 0 : it->second;
}

bool present_at(const std::vector<std::map<int, std::size_t>>& w, std::size_t t, int id) {
  return t < w.size() && w[t].count(id) != 0;
}

class Checker {
 public:
  explicit Checker(std::string name) { r_.name = std::move(name); }

  template <typename Describe>
  void expect(bool ok, Describe&& describe) {
    ++r_.checks;
    if (!ok && r_.pass) {
      r_.pass = false;
      std::ostringstream os;
      describe(os);
      r_.counterexample = os.str();
    }
  }

  LemmaResult result() const { return r_; }

 private:
  LemmaResult r_;
};

}  // namespace

LemmaReport assert_lemma_suite(const SearchOutcome& o) {
  const auto& W = o.weights;
  const std::size_t T = o.steps.size();
  const long long s = o.side;
  LemmaReport report;

  Checker inactive("inactive-non-increase");
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& [id, w] : W[t]) {
      if (id == o.steps[t].active) continue;
      const std::size_t next = weight_at(W, t + 1, id);
      inactive.expect(next <= w, [&](std::ostream& os) {
        os << "checkpoint " << id << " step " << t << ": " << w << " -> " << next;
      });
    }
  }
  report.results.push_back(inactive.result());

  Checker interval("active-interval");
  for (std::size_t t = 0; t < T;) {
    std::size_t end = t;
    while (end + 1 < T && o.steps[end + 1].active == o.steps[t].active) ++end;
    const int id = o.steps[t].active;
    const std::size_t before = weight_at(W, t, id);
    const std::size_t after = weight_at(W, end + 1, id);
    interval.expect(after <= before, [&](std::ostream& os) {
      os << "checkpoint " << id << " steps " << t << ".." << end << ": " << before << " -> " << after;
    });
    t = end + 1;
  }
  report.results.push_back(interval.result());

  // Bottleneck: minimum weight over the steps in which the checkpoint is present.
  std::map<int, std::size_t> bottleneck;
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& [id, w] : W[t]) {
      auto it = bottleneck.find(id);
      if (it == bottleneck.end()) {
        bottleneck[id] = w;
      } else {
        it->second = std::min(it->second, w);
      }
    }
  }

  Checker phase_growth("phase-non-increase");
  Checker explored("explored-by-active");
  Checker dominance("bottleneck-dominance");
  Checker end_total("phase-end-total");
  Checker preds("predecessor-count");
  std::map<int, int> successor;
  std::map<int, int> predecessor_count;
  for (const PhaseRecord& ph : o.phases) {
    if (ph.last_step < ph.first_step) continue;
    const auto t0 = static_cast<std::size_t>(ph.first_step);
    const auto t1 = static_cast<std::size_t>(ph.last_step);
    for (const auto& [id, w] : W[t0]) {
      const std::size_t after = weight_at(W, t1 + 1, id);
      phase_growth.expect(after <= w, [&](std::ostream& os) {
        os << "phase " << ph.index << " checkpoint " << id << ": " << w << " -> " << after;
      });
    }
    const int active = o.steps[t1].active;
    if (ph.upgraded) {
      const std::size_t b = bottleneck[active];
      const std::size_t got = o.checkpoints[static_cast<std::size_t>(active)].explored;
      explored.expect(got >= b * static_cast<std::size_t>(s), [&](std::ostream& os) {
        os << "phase " << ph.index << " checkpoint " << active << " explored " << got << " < " << b << "*" << s;
      });
    }
    std::size_t total = 0;
    for (const auto& [id, w] : W[t1]) {
      total += w;
      if (id == active) continue;
      dominance.expect(w <= bottleneck[active], [&](std::ostream& os) {
        os << "phase " << ph.index << ": checkpoint " << id << " weight " << w << " > bottleneck "
           << bottleneck[active] << " of " << active;
      });
    }
    const std::size_t limit = weight_at(W, t1, active) + static_cast<std::size_t>(10 * s);
    end_total.expect(total <= limit, [&](std::ostream& os) {
      os << "phase " << ph.index << ": total " << total << " > " << limit;
    });

    // Checkpoints created by earlier upgrades without a successor become predecessors of
    // the checkpoint active at the end of this phase.
    for (const CheckpointInfo& c : o.checkpoints) {
      if (c.added_in_phase < 0 || c.added_in_phase >= ph.index || c.id == active) continue;
      if (successor.count(c.id)) continue;
      successor[c.id] = active;
      ++predecessor_count[active];
    }
  }
  for (const auto& [id, n] : predecessor_count) {
    preds.expect(n <= 10, [&](std::ostream& os) { os << "checkpoint " << id << " has " << n << " predecessors"; });
  }
  report.results.push_back(phase_growth.result());
  report.results.push_back(explored.result());
  report.results.push_back(preds.result());
  report.results.push_back(end_total.result());
  report.results.push_back(dominance.result());

  Checker guards("guards-per-step");
  for (const StepRecord& st : o.steps) {
    guards.expect(st.guards_at_start <= static_cast<std::size_t>(30 * s), [&](std::ostream& os) {
      os << "step " << st.step << ": " << st.guards_at_start << " guards > 30*" << s;
    });
  }
  report.results.push_back(guards.result());

  Checker explorers("explorers-per-strip");
  Checker cleaners("cleaners-per-strip");
  for (const StripRecord& r : o.strips) {
    explorers.expect(r.explorers <= 10 * s, [&](std::ostream& os) {
      os << "step " << r.step << " depth " << r.depth << ": " << r.explorers << " explorers";
    });
    cleaners.expect(r.peak_cleaners <= r.bound, [&](std::ostream& os) {
      os << "step " << r.step << " " << r.frontier << " depth " << r.depth << ": " << r.peak_cleaners
         << " cleaners > " << r.bound;
    });
  }
  report.results.push_back(explorers.result());
  report.results.push_back(cleaners.result());

  Checker expansions("expansions-per-checkpoint");
  for (const CheckpointInfo& c : o.checkpoints) {
    expansions.expect(c.expansions_done <= s, [&](std::ostream& os) {
      os << "checkpoint " << c.id << " expanded " << c.expansions_done << " times";
    });
  }
  report.results.push_back(expansions.result());

  Checker partition("ownership-partition");
  for (const std::string& v : o.violations) {
    partition.expect(false, [&](std::ostream& os) { os << v; });
  }
  if (o.violations.empty()) partition.expect(true, [](std::ostream&) {});
  report.results.push_back(partition.result());

  (void)present_at;
  return report;
}

int round_side(int round) {
  const long long target = 1LL << round;
  return side_for_bound(target);
}

double unknown_size_bound(int c, long long n) {
  const double r2 = std::sqrt(2.0);
  return r2 * c / (r2 - 1.0) * (std::sqrt(2.0 * static_cast<double>(n)) - 1.0);
}

UnknownSizeOutcome mod_grid_searching(const PartialGrid& grid, const UnknownSizeConfig& config) {
  UnknownSizeOutcome out;
  out.c = config.c;
  for (int round = 1; round <= config.max_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    rec.side = round_side(round);
    rec.budget = static_cast<long long>(config.c) * rec.side;
    EngineConfig ec;
    ec.side = rec.side;
    ec.budget = rec.budget;
    ec.strip = config.strip;
    ec.throw_on_budget = false;
    SearchOutcome run = grid_searching(grid, ec);
    rec.success = !run.aborted;
    rec.searchers = run.trace.k;
    rec.moves = run.trace.moves.size();
    const VerificationReport vr = verify_trace(grid, run.trace);
    rec.monotone = vr.monotone;
    rec.connected = vr.connected;
    rec.complete = vr.complete;
    out.total_searchers += rec.searchers;
    out.rounds.push_back(rec);
    if (rec.success) {
      out.final_run = std::move(run);
      return out;
    }
  }
  throw Error(ErrorCode::AlgorithmStalled, "no round succeeded");
}

}  // namespace gridsearch
