#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "fairalloc/edges.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/localsearch.hpp"
#include "fairalloc/matching.hpp"

namespace fairalloc {

/// Maximum matching of players to fat resources they want (augmenting paths,
/// players and resources in ascending order).
PartialMatching max_fat_matching(const Instance& inst, const Params& params);

struct ProbeOutcome {
  Value tau = 0;
  bool success = false;
  long iterations = 0;
  long collapses = 0;
  double wall_ms = 0.0;
};

/// One record per phase boundary of a probe. Serialized as one JSON object
/// per line with keys in this order:
///   probe_tau iter root phase ell matched P A I d signature
struct TraceEvent {
  Value probe_tau = 0;
  long iteration = 0;
  PlayerId root = -1;
  Phase phase = Phase::build;
  int ell = 0;
  int matched = 0;
  std::vector<std::size_t> players;    // |P_i|
  std::vector<std::size_t> addable;    // |A_i|
  std::vector<std::size_t> immediate;  // |I_i| from a canonical decomposition
  std::vector<int> d;
  std::vector<std::int64_t> signature;
};

std::string to_json_line(const TraceEvent& e);

struct SolveOptions {
  ExtendOptions extend;  // on_event is ignored; use `trace`
  std::function<void(const TraceEvent&)> trace;
  /// Binary-search probes evaluated concurrently per round.
  int jobs = 1;
};

struct ProbeResult {
  std::variant<Allocation, Abort> outcome;
  ProbeOutcome stats;
  std::vector<TraceEvent> events;

  bool success() const { return std::holds_alternative<Allocation>(outcome); }
};

/// Runs the local search once for a fixed tau: a maximum fat matching, then
/// one extension per unmatched player in ascending order. tau = 0 succeeds
/// immediately with empty bundles.
ProbeResult solve_for_tau(const Instance& inst, Value tau, const Params& params, const SolveOptions& options = {});

struct SolveReport {
  Allocation allocation;
  Value tau_star = 0;
  Rational guaranteed;  // tau_star / beta
  std::vector<ProbeOutcome> probes;
};

/// Binary search over integer tau in [0, sum of values]: lo is the largest
/// successful probe (0 always succeeds), hi the smallest aborted one. Since
/// no tau <= OPT aborts, the final lo is at least OPT.
/// A `tau_hint` is probed first and narrows the initial bracket.
SolveReport solve(const Instance& inst, const Params& params_template, std::optional<Value> tau_hint = std::nullopt,
                  const SolveOptions& options = {});

}  // namespace fairalloc
