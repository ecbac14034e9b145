#include "fairalloc/localsearch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

namespace fairalloc {

// ---------------------------------------------------------------------------
// state helpers

std::vector<std::vector<PlayerId>> SearchState::layer_players() const {
  std::vector<std::vector<PlayerId>> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back(l.blockers);
  return out;
}

std::vector<PlayerId> SearchState::players_upto(int i) const {
  std::vector<PlayerId> out;
  for (int k = 0; k <= i && k < static_cast<int>(layers.size()); ++k) {
    out.insert(out.end(), layers[k].blockers.begin(), layers[k].blockers.end());
  }
  return out;
}

std::vector<PlayerId> SearchState::addable_players_upto(int i) const {
  std::vector<PlayerId> out;
  for (int k = 0; k <= i && k < static_cast<int>(layers.size()); ++k) {
    for (const auto& e : layers[k].addable) out.push_back(e.player);
  }
  return out;
}

std::vector<PlayerId> SearchState::immediate_players() const {
  std::vector<PlayerId> out;
  out.reserve(immediate.size());
  for (const auto& e : immediate) out.push_back(e.player);
  return out;
}

void SearchState::rebuild_graph() { graph = build_graph(*inst, matching, classes); }

bool fat_matching_is_maximum(const FlowGraph& g, const PartialMatching& m) {
  std::vector<bool> seen(g.num_vertices(), false);
  std::deque<int> queue;
  for (PlayerId p = 0; p < g.num_players(); ++p) {
    if (!m.fat_matched(p)) {
      seen[p] = true;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (!g.is_player(v) && g.out(v).empty()) return false;
    for (int w : g.out(v)) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return true;
}

namespace {

Value free_value(const ThinEdge& e, const PartialMatching& m, const Instance& inst) {
  Value v = 0;
  for (ResourceId r : e.resources) {
    if (m.owner(r) == -1) v += inst.value(r);
  }
  return v;
}

std::size_t total_size(const std::vector<std::vector<PlayerId>>& groups, int upto) {
  std::size_t n = 0;
  for (int i = 0; i <= upto && i < static_cast<int>(groups.size()); ++i) n += groups[i].size();
  return n;
}

/// Candidate search for one build phase. Sources P_{<=l}, sinks
/// A_{<=l+1} + I, flow kept maximal between candidates. Players are swept
/// once in ascending order; a rejected player stays rejected for the rest
/// of the phase.
class CandidateScan {
 public:
  explicit CandidateScan(const SearchState& s) : s_(s), flow_(s.graph), taken_(s.inst->num_resources(), false) {
    for (PlayerId p : s.players_upto(s.last())) flow_.add_source(p);
    for (PlayerId p : s.addable_players_upto(s.last())) flow_.add_sink(p);
    for (PlayerId p : s.immediate_players()) flow_.add_sink(p);
    flow_.augment();
    for (const auto& layer : s.layers) {
      for (const auto& e : layer.addable) mark(e.resources);
      for (PlayerId b : layer.blockers) {
        if (const auto* edge = s.matching.thin_edge(b)) mark(edge->resources);
      }
    }
    for (const auto& e : s.immediate) mark(e.resources);
  }

  std::optional<ThinEdge> next() {
    const Instance& inst = *s_.inst;
    std::vector<ResourceId> available;
    for (; cursor_ < inst.num_players(); ++cursor_) {
      const PlayerId p = cursor_;
      if (flow_.is_sink(p)) continue;
      available.clear();
      for (ResourceId r : inst.interest(p)) {
        if (!s_.classes.is_fat[r] && !taken_[r] && inst.value(r) > 0) available.push_back(r);
      }
      auto edge = build_minimal_thin_edge(p, s_.params.tau, s_.params.alpha, available, inst);
      if (!edge) continue;
      if (flow_.try_sink(p)) {
        ++cursor_;
        return edge;
      }
    }
    return std::nullopt;
  }

  void mark(const std::vector<ResourceId>& rs) {
    for (ResourceId r : rs) taken_[r] = true;
  }

  int value() const { return flow_.value(); }

 private:
  const SearchState& s_;
  DisjointPathFlow flow_;
  std::vector<bool> taken_;
  PlayerId cursor_ = 0;
};

bool is_minimal(const ThinEdge& e, const Rational& target, const Instance& inst) {
  Value total = 0;
  for (ResourceId r : e.resources) total += inst.value(r);
  if (!at_least(total, target)) return false;
  for (ResourceId r : e.resources) {
    if (at_least(total - inst.value(r), target)) return false;
  }
  return true;
}

}  // namespace

bool immediately_addable(const ThinEdge& e, const PartialMatching& m, const Params& p, const Instance& inst) {
  return at_least(free_value(e, m, inst), p.tau / p.beta);
}

SearchState init_state(const Instance& inst, PartialMatching m, PlayerId root, const Params& params) {
  if (root < 0 || root >= inst.num_players()) throw std::invalid_argument("root out of range");
  if (m.matched(root)) throw std::invalid_argument("player " + std::to_string(root) + " is already matched");
  SearchState s;
  s.inst = &inst;
  s.params = params;
  s.classes = classify_resources(inst, params);
  s.root = root;
  s.matching = std::move(m);
  s.layers.push_back(Layer{{}, {root}, 0});
  s.initial_fat_count = s.matching.fat_count();
  s.initial_size = s.matching.size();
  s.rebuild_graph();
  return s;
}

std::optional<ThinEdge> find_candidate(const SearchState& s) {
  CandidateScan scan(s);
  return scan.next();
}

void build_phase(SearchState& s) {
  CandidateScan scan(s);
  Layer next;
  while (auto c = scan.next()) {
    scan.mark(c->resources);
    if (immediately_addable(*c, s.matching, s.params, *s.inst)) {
      s.immediate.push_back(std::move(*c));
    } else {
      next.addable.push_back(std::move(*c));
    }
  }
  for (const auto& e : next.addable) {
    for (ResourceId r : e.resources) {
      const PlayerId b = s.matching.owner(r);
      if (b != -1) next.blockers.push_back(b);
    }
  }
  std::sort(next.blockers.begin(), next.blockers.end());
  next.blockers.erase(std::unique(next.blockers.begin(), next.blockers.end()), next.blockers.end());
  next.d = scan.value();
  s.layers.push_back(std::move(next));
}

void alternate_along(PartialMatching& m, const FlowGraph& g, const std::vector<int>& path, const ThinEdge& iedge,
                     const Params& params, const Instance& inst) {
  if (path.empty()) throw InvariantViolation("empty alternating path");
  const int u = path.front();
  const int v = path.back();
  if (!g.is_player(u) || !g.is_player(v)) throw InvariantViolation("alternating path must join two players");
  if (iedge.player != v) throw InvariantViolation("immediately addable edge does not belong to the path's sink");
  const int fat_before = m.fat_count();

  std::vector<std::pair<PlayerId, ResourceId>> gains;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int a = path[k];
    const int b = path[k + 1];
    if (!g.has_arc(a, b)) throw InvariantViolation("alternating path uses a missing arc");
    if (g.is_player(a) == g.is_player(b)) throw InvariantViolation("alternating path is not bipartite");
    if (g.is_player(a)) {
      gains.emplace_back(a, g.resource_at(b));
    } else {
      if (m.fat_resource(b) != g.resource_at(a)) throw InvariantViolation("reversed arc without a fat edge");
      m.unassign(b);
    }
  }
  // The source's blocking edge; the root has only the empty placeholder.
  if (m.thin_matched(u)) m.unassign(u);
  if (m.matched(u) && u != v) throw InvariantViolation("source of an alternating path holds a fat edge");
  for (auto [p, r] : gains) m.assign_fat(p, r);

  auto subset = beta_minimal_subset(
      iedge.resources, params, [&](ResourceId r) { return m.owner(r) != -1; }, inst);
  if (!subset) throw InvariantViolation("immediately addable edge of player " + std::to_string(v) + " lost its free subset");
  if (m.matched(v)) throw InvariantViolation("sink of an alternating path is still matched");
  ThinEdge e;
  e.player = v;
  e.resources = std::move(*subset);
  for (ResourceId r : e.resources) e.value += inst.value(r);
  e.delta_class = params.beta;
  m.assign_thin(std::move(e));
  if (m.fat_count() != fat_before) throw InvariantViolation("alternation changed the number of fat edges");
}

int collapse_phase(SearchState& s) {
  int collapses = 0;
  while (!s.matching.matched(s.root)) {
    const auto players = s.layer_players();
    const auto decomp = canonical_decomposition(s.graph, players, s.immediate_players());
    int t = -1;
    for (int i = 0; i <= s.last(); ++i) {
      const auto found = static_cast<std::int64_t>(decomp.sinks_by_layer[i].size());
      if (Rational(found) >= s.params.mu * static_cast<std::int64_t>(players[i].size())) {
        t = i;
        break;
      }
    }
    if (t < 0) break;
    if (players[t].empty()) {
      throw InvariantViolation("earliest collapsible layer " + std::to_string(t) + " has no players");
    }

    PathSolution rerouted;
    if (t >= 1) rerouted = rerouted_solution(s.graph, decomp, players, t, s.addable_players_upto(t));

    std::unordered_map<PlayerId, std::size_t> edge_of;
    for (std::size_t k = 0; k < s.immediate.size(); ++k) edge_of[s.immediate[k].player] = k;
    for (const auto& path : decomp.paths_by_layer[t].paths) {
      alternate_along(s.matching, s.graph, path, s.immediate.at(edge_of.at(path.back())), s.params, *s.inst);
      ++s.stats.alternations;
    }
    ++s.stats.collapses;
    ++collapses;

    auto& layer = s.layers[t];
    const auto used_sources = decomp.paths_by_layer[t].sources();
    std::erase_if(layer.blockers, [&](PlayerId p) {
      return std::find(used_sources.begin(), used_sources.end(), p) != used_sources.end();
    });

    std::vector<bool> keep_sink(s.inst->num_players(), false);
    for (int i = 0; i < t; ++i) {
      for (PlayerId p : decomp.sinks_by_layer[i]) keep_sink[p] = true;
    }
    std::vector<ThinEdge> next_immediate;
    for (auto& e : s.immediate) {
      if (keep_sink[e.player]) next_immediate.push_back(std::move(e));
    }
    std::vector<bool> reached(s.inst->num_players(), false);
    for (int p : rerouted.sinks()) reached[p] = true;
    std::vector<ThinEdge> still_blocked;
    for (auto& a : layer.addable) {
      if (!immediately_addable(a, s.matching, s.params, *s.inst)) {
        still_blocked.push_back(std::move(a));
      } else if (reached[a.player]) {
        next_immediate.push_back(std::move(a));
      }
    }
    layer.addable = std::move(still_blocked);
    s.immediate = std::move(next_immediate);
    s.layers.resize(t + 1);
    s.rebuild_graph();
  }
  return collapses;
}

// ---------------------------------------------------------------------------
// signature

std::int64_t signature_coordinate(std::size_t players, int layer, const Rational& mu, const Rational& delta) {
  if (players == 0) return kSignatureEmpty;
  using boost::multiprecision::cpp_int;
  // base = 1/(1 - mu) = bn/bd, q = players / delta^(layer+1) = qn/qd
  const Rational base = 1 / (1 - mu);
  const long double x =
      (std::log(static_cast<long double>(players)) - (layer + 1) * std::log(to_long_double(delta))) /
      std::log(to_long_double(base));
  auto k = static_cast<std::int64_t>(std::floor(x));
  const long double frac = x - std::floor(x);
  if (frac < 1e-9L || frac > 1 - 1e-9L) {
    const cpp_int bn = base.numerator(), bd = base.denominator();
    cpp_int qn = cpp_int(players) * boost::multiprecision::pow(cpp_int(delta.denominator()), layer + 1);
    cpp_int qd = boost::multiprecision::pow(cpp_int(delta.numerator()), layer + 1);
    auto le = [&](std::int64_t e) {  // base^e <= q
      return boost::multiprecision::pow(bn, static_cast<unsigned>(e)) * qd <=
             qn * boost::multiprecision::pow(bd, static_cast<unsigned>(e));
    };
    while (k > 0 && !le(k)) --k;
    while (le(k + 1)) ++k;
  }
  return k;
}

std::vector<std::int64_t> signature(const SearchState& s) {
  std::vector<std::int64_t> sig;
  for (int i = 0; i <= s.last(); ++i) {
    sig.push_back(signature_coordinate(s.layers[i].blockers.size(), i, s.params.mu, s.params.delta));
  }
  sig.push_back(kSignatureSentinel);
  return sig;
}

// ---------------------------------------------------------------------------
// invariants

std::string InvariantReport::summary() const {
  std::ostringstream out;
  out << checks << " checks, " << failures.size() << " failures";
  for (const auto& f : failures) {
    out << "\n  " << f.name;
    if (f.layer >= 0) out << " (layer " << f.layer << ")";
    if (!f.detail.empty()) out << ": " << f.detail;
  }
  return out.str();
}

InvariantReport check_invariants(const SearchState& s) {
  InvariantReport rep;
  const Instance& inst = *s.inst;
  const Params& prm = s.params;
  auto expect = [&](bool ok, const char* name, int layer, const std::string& detail = {}) {
    ++rep.checks;
    if (!ok) rep.failures.push_back({name, layer, detail});
  };
  const auto players = s.layer_players();
  const int last = s.last();

  expect(!s.layers.empty() && s.layers[0].blockers == std::vector<PlayerId>{s.root} && s.layers[0].addable.empty(),
         "root_layer", 0);
  expect(!s.matching.matched(s.root), "root_unmatched", 0);
  expect(s.matching.fat_count() == s.initial_fat_count, "fat_count", -1,
         std::to_string(s.matching.fat_count()) + " vs " + std::to_string(s.initial_fat_count));
  expect(s.matching.size() == s.initial_size, "matching_size", -1);

  // DP(P_{<=l}, I) = |I|
  const auto sinks_i = s.immediate_players();
  {
    const auto sources = s.players_upto(last);
    const auto dp = max_disjoint_paths(s.graph, sources, sinks_i).size();
    expect(dp == s.immediate.size(), "flow_equals_immediate", last,
           "DP = " + std::to_string(dp) + ", |I| = " + std::to_string(s.immediate.size()));
  }
  for (int i = 1; i <= last; ++i) {
    const auto sources = s.players_upto(i - 1);
    auto sinks = s.addable_players_upto(i);
    sinks.insert(sinks.end(), sinks_i.begin(), sinks_i.end());
    const auto dp = max_disjoint_paths(s.graph, sources, sinks).size();
    expect(static_cast<int>(dp) >= s.layers[i].d, "flow_at_least_d", i,
           "DP = " + std::to_string(dp) + ", d = " + std::to_string(s.layers[i].d));
  }
  std::size_t addable_so_far = 0;
  for (int i = 0; i <= last; ++i) {
    addable_so_far += s.layers[i].addable.size();
    expect(static_cast<std::size_t>(s.layers[i].d) >= addable_so_far, "d_at_least_addable", i,
           "d = " + std::to_string(s.layers[i].d) + ", |A| = " + std::to_string(addable_so_far));
  }
  for (int i = 1; i <= last; ++i) {
    const auto below = static_cast<std::int64_t>(total_size(players, i - 1));
    expect(Rational(static_cast<std::int64_t>(players[i].size())) >= prm.delta * below, "growth", i,
           "|P_i| = " + std::to_string(players[i].size()) + ", |P_<i| = " + std::to_string(below));
  }

  // addable and immediate edges pairwise disjoint, A_i clear of B_{<i}, one
  // sink per player
  std::vector<int> uses(inst.num_resources(), 0);
  std::vector<int> blocked_below(inst.num_resources(), 0);
  std::vector<int> sink_uses(inst.num_players(), 0);
  bool clear_of_lower_blockers = true;
  for (int i = 0; i <= last; ++i) {
    for (const auto& e : s.layers[i].addable) {
      for (ResourceId r : e.resources) {
        ++uses[r];
        if (blocked_below[r]) clear_of_lower_blockers = false;
      }
      ++sink_uses[e.player];
    }
    for (PlayerId b : s.layers[i].blockers) {
      if (const auto* e = s.matching.thin_edge(b)) {
        for (ResourceId r : e->resources) blocked_below[r] = 1;
      }
    }
  }
  for (const auto& e : s.immediate) {
    for (ResourceId r : e.resources) ++uses[r];
    ++sink_uses[e.player];
  }
  expect(std::all_of(uses.begin(), uses.end(), [](int u) { return u <= 1; }), "tree_resources_disjoint", -1);
  expect(clear_of_lower_blockers, "addable_clear_of_lower_blockers", -1);
  expect(std::all_of(sink_uses.begin(), sink_uses.end(), [](int u) { return u <= 1; }), "one_sink_per_player", -1);

  // blockers: thin-matched, never fat, each in one layer
  std::vector<int> in_tree(inst.num_players(), 0);
  for (int i = 0; i <= last; ++i) {
    for (PlayerId b : players[i]) {
      ++in_tree[b];
      expect(!s.matching.fat_matched(b), "tree_player_not_fat", i, "player " + std::to_string(b));
      if (i > 0) expect(s.matching.thin_matched(b), "blocker_in_matching", i, "player " + std::to_string(b));
    }
  }
  expect(std::all_of(in_tree.begin(), in_tree.end(), [](int c) { return c <= 1; }), "layers_disjoint", -1);

  // edge windows and minimality
  const Rational addable_lo = prm.tau / prm.alpha;
  const Rational addable_hi = prm.tau / prm.alpha + prm.tau / prm.beta;
  const Rational blocking_lo = prm.tau / prm.beta;
  const Rational blocking_hi = 2 * prm.tau / prm.beta;
  auto check_addable = [&](const ThinEdge& e, int layer, bool expect_immediate) {
    const Rational v(e.value);
    expect(v >= addable_lo && v < addable_hi, "addable_window", layer, "value " + std::to_string(e.value));
    expect(is_minimal(e, addable_lo, inst), "addable_minimal", layer);
    expect(immediately_addable(e, s.matching, prm, inst) == expect_immediate,
           expect_immediate ? "immediate_is_free" : "addable_is_blocked", layer, "player " + std::to_string(e.player));
    bool ok = true;
    for (ResourceId r : e.resources) ok = ok && !s.classes.is_fat[r] && inst.interested(e.player, r);
    expect(ok, "edge_resources_thin_and_wanted", layer);
  };
  for (int i = 0; i <= last; ++i) {
    for (const auto& e : s.layers[i].addable) check_addable(e, i, false);
  }
  for (const auto& e : s.immediate) check_addable(e, -1, true);
  for (PlayerId p = 0; p < inst.num_players(); ++p) {
    if (const auto* e = s.matching.thin_edge(p)) {
      const Rational v(e->value);
      expect(v >= blocking_lo && v < blocking_hi, "blocking_window", -1, "player " + std::to_string(p));
      expect(is_minimal(*e, blocking_lo, inst), "blocking_minimal", -1, "player " + std::to_string(p));
    }
  }
  return rep;
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::build:
      return "build";
    case Phase::collapse:
      return "collapse";
    case Phase::abort:
      return "abort";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// driver

ExtendResult extend_matching(const Instance& inst, PartialMatching m, PlayerId root, const Params& params,
                             const ExtendOptions& options) {
  SearchState s = init_state(inst, std::move(m), root, params);
  if (!fat_matching_is_maximum(s.graph, s.matching)) {
    throw std::invalid_argument("matching does not assign a maximum number of fat resources");
  }
  auto emit = [&](Phase phase) {
    if (options.on_event) options.on_event(s, phase);
  };
  auto account = [&] {
    if (options.stats) {
      options.stats->iterations += s.stats.iterations;
      options.stats->collapses += s.stats.collapses;
      options.stats->alternations += s.stats.alternations;
    }
    if (options.monitor) options.monitor->alternations += s.stats.alternations;
  };
  std::vector<std::int64_t> previous_signature;

  for (;;) {
    if (options.check_invariants) {
      auto report = check_invariants(s);
      const auto sig = signature(s);
      if (!previous_signature.empty()) {
        ++report.checks;
        if (!std::lexicographical_compare(sig.begin(), sig.end(), previous_signature.begin(),
                                          previous_signature.end())) {
          report.failures.push_back({"signature_decreases", s.last(), {}});
        }
        if (options.monitor) ++options.monitor->signature_steps;
      }
      ++report.checks;
      if (!std::is_sorted(sig.begin(), sig.end())) report.failures.push_back({"signature_nondecreasing", s.last(), {}});
      previous_signature = sig;
      if (options.monitor) {
        ++options.monitor->boundaries;
        options.monitor->checks += report.checks;
        options.monitor->failures.insert(options.monitor->failures.end(), report.failures.begin(),
                                         report.failures.end());
      }
      if (options.fatal_invariants && !report.ok()) throw InvariantViolation(report.summary());
    }
    if (++s.stats.iterations > options.max_iterations) throw InvariantViolation("iteration limit exceeded");

    const std::size_t tree_players = s.players_upto(s.last()).size();
    build_phase(s);
    emit(Phase::build);
    const int d = s.layers.back().d;
    if (Rational(d) < params.gamma * static_cast<std::int64_t>(tree_players)) {
      emit(Phase::abort);
      account();
      return Abort{params.tau, s.last(), d, tree_players};
    }
    collapse_phase(s);
    emit(Phase::collapse);
    if (s.matching.matched(root)) break;
  }
  account();
  if (s.matching.fat_count() != s.initial_fat_count) throw InvariantViolation("fat edge count changed");
  if (s.matching.size() != s.initial_size + 1) throw InvariantViolation("matching did not grow by exactly one");
  return std::move(s.matching);
}

}  // namespace fairalloc
