#include "fairalloc/solver.hpp"

#include <algorithm>
#include <future>
#include "json.hpp"

namespace fairalloc {

namespace {

bool try_kuhn(const Instance& inst, const std::vector<bool>& is_fat, PlayerId p, std::vector<PlayerId>& owner,
              std::vector<char>& visited) {
  for (ResourceId r : inst.interest(p)) {
    if (!is_fat[r] || visited[r]) continue;
    visited[r] = 1;
    if (owner[r] == -1 || try_kuhn(inst, is_fat, owner[r], owner, visited)) {
      owner[r] = p;
      return true;
    }
  }
  return false;
}

TraceEvent make_event(const SearchState& s, Phase phase, Value tau, long iteration_base) {
  TraceEvent e;
  e.probe_tau = tau;
  e.iteration = iteration_base + s.stats.iterations;
  e.root = s.root;
  e.phase = phase;
  e.ell = s.last();
  e.matched = s.matching.size();
  const auto players = s.layer_players();
  const auto decomp = canonical_decomposition(s.graph, players, s.immediate_players());
  for (int i = 0; i <= s.last(); ++i) {
    e.players.push_back(players[i].size());
    e.addable.push_back(s.layers[i].addable.size());
    e.immediate.push_back(decomp.sinks_by_layer[i].size());
    e.d.push_back(s.layers[i].d);
  }
  e.signature = signature(s);
  return e;
}

}  // namespace

PartialMatching max_fat_matching(const Instance& inst, const Params& params) {
  const auto classes = classify_resources(inst, params);
  std::vector<PlayerId> owner(inst.num_resources(), -1);
  std::vector<char> visited(inst.num_resources());
  for (PlayerId p = 0; p < inst.num_players(); ++p) {
    std::fill(visited.begin(), visited.end(), 0);
    try_kuhn(inst, classes.is_fat, p, owner, visited);
  }
  PartialMatching m(inst.num_players(), inst.num_resources());
  for (ResourceId r = 0; r < inst.num_resources(); ++r) {
    if (owner[r] != -1) m.assign_fat(owner[r], r);
  }
  return m;
}

std::string to_json_line(const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["probe_tau"] = e.probe_tau;
  j["iter"] = e.iteration;
  j["root"] = e.root;
  j["phase"] = to_string(e.phase);
  j["ell"] = e.ell;
  j["matched"] = e.matched;
  j["P"] = e.players;
  j["A"] = e.addable;
  j["I"] = e.immediate;
  j["d"] = e.d;
  auto sig = nlohmann::ordered_json::array();
  for (auto c : e.signature) {
    if (c == kSignatureSentinel) {
      sig.push_back("inf");
    } else if (c == kSignatureEmpty) {
      sig.push_back("-inf");
    } else {
      sig.push_back(c);
    }
  }
  j["signature"] = sig;
  return j.dump();
}

ProbeResult solve_for_tau(const Instance& inst, Value tau, const Params& params, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ProbeResult result;
  result.stats.tau = tau;
  auto finish = [&] {
    result.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
  };
  if (tau <= 0) {
    Allocation empty;
    empty.bundles.assign(inst.num_players(), {});
    result.outcome = std::move(empty);
    result.stats.success = true;
    return finish();
  }

  Params p = params;
  p.tau = Rational(tau);
  PartialMatching m = max_fat_matching(inst, p);
  ExtendOptions extend = options.extend;
  SearchStats totals;
  extend.stats = &totals;
  long iteration_base = 0;
  if (options.trace) {
    extend.on_event = [&](const SearchState& s, Phase phase) {
      result.events.push_back(make_event(s, phase, tau, iteration_base));
    };
  } else {
    extend.on_event = nullptr;
  }
  for (PlayerId root = 0; root < inst.num_players(); ++root) {
    if (m.matched(root)) continue;
    iteration_base = totals.iterations;
    auto out = extend_matching(inst, std::move(m), root, p, extend);
    result.stats.iterations = totals.iterations;
    result.stats.collapses = totals.collapses;
    if (auto* abort = std::get_if<Abort>(&out)) {
      result.outcome = *abort;
      return finish();
    }
    m = std::move(std::get<PartialMatching>(out));
  }
  result.outcome = m.to_allocation();
  result.stats.success = true;
  return finish();
}

SolveReport solve(const Instance& inst, const Params& params_template, std::optional<Value> tau_hint,
                  const SolveOptions& options) {
  SolveReport report;
  Value lo = 0;
  Value hi = inst.total_value() + 1;
  Allocation best;
  best.bundles.assign(inst.num_players(), {});

  auto record = [&](ProbeResult& r) {
    report.probes.push_back(r.stats);
    if (options.trace) {
      for (const auto& e : r.events) options.trace(e);
    }
  };

  auto run_round = [&](std::vector<Value> taus) {
    std::vector<ProbeResult> results(taus.size());
    if (options.jobs > 1 && taus.size() > 1) {
      // each probe gets its own monitor; they are merged in probe order
      std::vector<InvariantMonitor> monitors(taus.size());
      std::vector<std::future<ProbeResult>> futures;
      for (std::size_t k = 0; k < taus.size(); ++k) {
        SolveOptions local = options;
        if (options.extend.monitor) local.extend.monitor = &monitors[k];
        futures.push_back(std::async(std::launch::async, [&inst, &params_template, local, t = taus[k]] {
          return solve_for_tau(inst, t, params_template, local);
        }));
      }
      for (std::size_t k = 0; k < taus.size(); ++k) results[k] = futures[k].get();
      if (auto* total = options.extend.monitor) {
        for (const auto& m : monitors) {
          total->boundaries += m.boundaries;
          total->checks += m.checks;
          total->signature_steps += m.signature_steps;
          total->alternations += m.alternations;
          total->failures.insert(total->failures.end(), m.failures.begin(), m.failures.end());
        }
      }
    } else {
      for (std::size_t k = 0; k < taus.size(); ++k) results[k] = solve_for_tau(inst, taus[k], params_template, options);
    }
    // Bracketing: hi drops to the smallest abort, lo rises to the largest
    // success below it.
    for (std::size_t k = 0; k < taus.size(); ++k) {
      if (!results[k].success() && taus[k] < hi) hi = taus[k];
    }
    for (std::size_t k = 0; k < taus.size(); ++k) {
      if (results[k].success() && taus[k] > lo && taus[k] < hi) {
        lo = taus[k];
        best = std::get<Allocation>(results[k].outcome);
      }
    }
    for (auto& r : results) record(r);
  };

  if (tau_hint && *tau_hint > lo && *tau_hint < hi) run_round({*tau_hint});
  while (hi - lo > 1) {
    const int k = std::max(1, options.jobs);
    std::vector<Value> taus;
    for (int i = 1; i <= k; ++i) {
      Value t = lo + (hi - lo) * i / (k + 1);
      if (t > lo && t < hi && (taus.empty() || taus.back() != t)) taus.push_back(t);
    }
    if (taus.empty()) taus.push_back(lo + 1);
    run_round(std::move(taus));
  }
  report.allocation = std::move(best);
  report.tau_star = lo;
  report.guaranteed = Rational(lo) / params_template.beta;
  return report;
}

}  // namespace fairalloc
