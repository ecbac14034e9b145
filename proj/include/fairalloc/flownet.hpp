#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fairalloc/edges.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/matching.hpp"

namespace fairalloc {

/// Directed graph over players and fat resources. Vertices 0..n-1 are the
/// players; vertex n + k is the k-th fat resource. A player points at every
/// fat resource it wants, except that a matched fat edge (p, {f}) is
/// reversed into f -> p.
class FlowGraph {
 public:
  FlowGraph() = default;

  /// Arbitrary graph for tests: vertices [0, players) are players, the rest
  /// resource vertices (resource id = vertex - players).
  static FlowGraph from_arcs(int players, int resources, const std::vector<std::pair<int, int>>& arcs);

  int num_vertices() const { return static_cast<int>(out_.size()); }
  int num_players() const { return num_players_; }
  bool is_player(int v) const { return v < num_players_; }

  ResourceId resource_at(int v) const { return resource_of_vertex_[v - num_players_]; }
  /// -1 if r is not a fat resource.
  int vertex_of(ResourceId r) const;

  /// Sorted ascending.
  std::span<const int> out(int v) const { return out_[v]; }
  bool has_arc(int from, int to) const;
  std::size_t num_arcs() const;

 private:
  friend FlowGraph build_graph(const Instance&, const PartialMatching&, const ResourceClasses&);

  int num_players_ = 0;
  std::vector<ResourceId> resource_of_vertex_;
  std::vector<int> vertex_of_resource_;
  std::vector<std::vector<int>> out_;
};

FlowGraph build_graph(const Instance& inst, const PartialMatching& m, const ResourceClasses& classes);

/// Vertex-disjoint source -> sink paths. A path may consist of a single
/// vertex that is both a source and a sink.
struct PathSolution {
  std::vector<std::vector<int>> paths;

  std::size_t size() const { return paths.size(); }
  std::vector<int> sources() const;
  std::vector<int> sinks() const;
  std::vector<int> vertices() const;
};

/// Unit vertex-capacity max flow over a FlowGraph (vertex splitting + BFS
/// augmenting paths). Sources and sinks can be added incrementally; the flow
/// is kept between augmentations so callers can warm start.
class DisjointPathFlow {
 public:
  explicit DisjointPathFlow(const FlowGraph& g);

  void add_source(int v);
  void add_sink(int v);
  bool is_sink(int v) const;

  /// Routes the given paths as initial flow. Every path must start at a
  /// registered source and end at a registered sink; throws
  /// std::invalid_argument if the paths are infeasible.
  void load(const PathSolution& base);

  /// One BFS augmenting path; false if none exists.
  bool augment_once();
  /// Augments to a maximum flow; returns the number of new paths.
  int augment();

  /// Adds v as a sink and tries one augmentation. On failure the sink is
  /// withdrawn again and the flow is unchanged.
  bool try_sink(int v);

  int value() const { return value_; }
  PathSolution paths() const;

 private:
  struct Arc {
    int to;
    int cap;
    int rev;
    bool forward;  // false for residual twins and withdrawn sinks
  };

  int in(int v) const { return 2 * v; }
  int outn(int v) const { return 2 * v + 1; }
  int add_arc(int from, int to);
  void push(int from, int arc_index);

  const FlowGraph* g_;
  int source_;
  int sink_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<int> source_arc_;  // per vertex, index in adj_[source_] or -1
  std::vector<int> sink_arc_;    // per vertex, index in adj_[outn(v)] or -1
  int value_ = 0;
};

PathSolution max_disjoint_paths(const FlowGraph& g, std::span<const int> sources, std::span<const int> sinks);

/// Optimal solution for (sources, sinks) obtained by augmenting `base`.
/// Every sink used by `base` stays in use. Throws std::invalid_argument if
/// `base` is not feasible for these sources and sinks.
PathSolution augment_from(const FlowGraph& g, const PathSolution& base, std::span<const int> sources,
                          std::span<const int> sinks);

/// I_0..I_l of the immediately addable sinks together with a witness W
/// split by the layer its paths start in.
struct CanonicalDecomposition {
  std::vector<std::vector<PlayerId>> sinks_by_layer;  // I_i as sink players
  std::vector<PathSolution> paths_by_layer;           // W_i
  PathSolution solution;                              // W

  int layers() const { return static_cast<int>(sinks_by_layer.size()); }
  std::size_t sinks_upto(int i) const;
};

/// Adds the source groups P_0, P_1, ... one at a time and augments after
/// each; I_i is the set of sinks whose final path starts in P_i.
CanonicalDecomposition canonical_decomposition(const FlowGraph& g,
                                               const std::vector<std::vector<PlayerId>>& layer_players,
                                               std::span<const PlayerId> sinks);

/// Optimal solution X for sources P_{<t} and sinks A_{<=t} + I_{<t}, grown
/// from W_{<t}. It uses every sink of I_{<t} and avoids the paths of W_t.
/// Throws std::logic_error if the decomposition does not support that.
PathSolution rerouted_solution(const FlowGraph& g, const CanonicalDecomposition& decomp,
                               const std::vector<std::vector<PlayerId>>& layer_players, int t,
                               std::span<const PlayerId> addable_sinks);

}  // namespace fairalloc
