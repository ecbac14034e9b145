#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fairalloc/edges.hpp"
#include "fairalloc/flownet.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/matching.hpp"

namespace fairalloc {

/// A broken internal invariant. Always a defect, never an input problem.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Layer L_i = (A_i, B_i, d_i). B_i is kept as the list of blocking players;
/// their edges live in the matching. Layer 0 holds only the root with an
/// empty placeholder edge.
struct Layer {
  std::vector<ThinEdge> addable;
  std::vector<PlayerId> blockers;
  int d = 0;
};

struct SearchStats {
  long iterations = 0;
  long collapses = 0;
  long alternations = 0;
};

struct SearchState {
  const Instance* inst = nullptr;
  Params params;
  ResourceClasses classes;
  PlayerId root = -1;
  std::vector<Layer> layers;
  std::vector<ThinEdge> immediate;  // I
  PartialMatching matching;
  FlowGraph graph;
  int initial_fat_count = 0;
  int initial_size = 0;
  SearchStats stats;

  int last() const { return static_cast<int>(layers.size()) - 1; }

  /// P_0..P_l.
  std::vector<std::vector<PlayerId>> layer_players() const;
  /// P_{<=i}.
  std::vector<PlayerId> players_upto(int i) const;
  /// Sink players of A_{<=i}.
  std::vector<PlayerId> addable_players_upto(int i) const;
  /// Sink players of I.
  std::vector<PlayerId> immediate_players() const;

  void rebuild_graph();
};

/// Reached when a freshly built layer has d < gamma |P_{<=l}|. Under
/// validated parameters this can only happen if no allocation of value tau
/// exists.
struct Abort {
  Rational tau;
  int layer = 0;
  int d = 0;
  std::size_t tree_players = 0;
};

/// No alternating path in the graph from a player without a fat edge to an
/// unassigned fat resource.
bool fat_matching_is_maximum(const FlowGraph& g, const PartialMatching& m);

/// The edge keeps a subset disjoint from the matching worth >= tau/beta.
bool immediately_addable(const ThinEdge& e, const PartialMatching& m, const Params& p, const Instance& inst);

/// Throws std::invalid_argument if root is already matched.
SearchState init_state(const Instance& inst, PartialMatching m, PlayerId root, const Params& params);

/// First candidate edge in ascending player order for an empty A_{l+1}.
std::optional<ThinEdge> find_candidate(const SearchState& s);

/// Adds every candidate to I or to a new layer A_{l+1}, then records the
/// blockers and d_{l+1}.
void build_phase(SearchState& s);

/// Flips the fat edges along `path`, drops the source's blocking edge and
/// gives the sink a beta-minimal free part of `iedge`. Throws
/// InvariantViolation if the number of fat edges would change or no free
/// subset remains.
void alternate_along(PartialMatching& m, const FlowGraph& g, const std::vector<int>& path, const ThinEdge& iedge,
                     const Params& params, const Instance& inst);

/// Collapses the earliest collapsible layer until none is left (or the root
/// got matched). Returns the number of collapses.
int collapse_phase(SearchState& s);

/// Signature (s_0, ..., s_l, sentinel) with
/// s_i = floor(log_{1/(1-mu)} (|P_i| / delta^(i+1))).
inline constexpr std::int64_t kSignatureSentinel = INT64_MAX;
inline constexpr std::int64_t kSignatureEmpty = INT64_MIN;
std::vector<std::int64_t> signature(const SearchState& s);
std::int64_t signature_coordinate(std::size_t players, int layer, const Rational& mu, const Rational& delta);

struct InvariantFailure {
  std::string name;
  int layer = -1;
  std::string detail;
};

struct InvariantReport {
  long checks = 0;
  std::vector<InvariantFailure> failures;

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

/// Recomputes every flow value from scratch and checks the state against all
/// iterative-step-boundary invariants.
InvariantReport check_invariants(const SearchState& s);

enum class Phase { build, collapse, abort };
const char* to_string(Phase p);

/// Running totals across extend_matching calls.
struct InvariantMonitor {
  long boundaries = 0;
  long checks = 0;
  long signature_steps = 0;
  long alternations = 0;
  std::vector<InvariantFailure> failures;
};

struct ExtendOptions {
  bool check_invariants = false;
  /// With check_invariants: throw InvariantViolation on the first failure.
  bool fatal_invariants = true;
  InvariantMonitor* monitor = nullptr;
  std::function<void(const SearchState&, Phase)> on_event;
  /// Incremented by the run's iterations, collapses and alternations.
  SearchStats* stats = nullptr;
  long max_iterations = 10'000'000;
};

using ExtendResult = std::variant<PartialMatching, Abort>;

/// Matches `root` in addition to every player already matched by `m`.
/// `m` must assign a maximum number of fat resources.
ExtendResult extend_matching(const Instance& inst, PartialMatching m, PlayerId root, const Params& params,
                             const ExtendOptions& options = {});

}  // namespace fairalloc
