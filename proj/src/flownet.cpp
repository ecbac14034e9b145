#include "fairalloc/flownet.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace fairalloc {

FlowGraph FlowGraph::from_arcs(int players, int resources, const std::vector<std::pair<int, int>>& arcs) {
  FlowGraph g;
  g.num_players_ = players;
  g.out_.assign(players + resources, {});
  for (int k = 0; k < resources; ++k) {
    g.resource_of_vertex_.push_back(k);
    g.vertex_of_resource_.push_back(players + k);
  }
  for (auto [a, b] : arcs) {
    if (a < 0 || b < 0 || a >= g.num_vertices() || b >= g.num_vertices()) {
      throw std::invalid_argument("arc endpoint out of range");
    }
    g.out_[a].push_back(b);
  }
  for (auto& list : g.out_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return g;
}

int FlowGraph::vertex_of(ResourceId r) const {
  if (r < 0 || r >= static_cast<int>(vertex_of_resource_.size())) return -1;
  return vertex_of_resource_[r];
}

bool FlowGraph::has_arc(int from, int to) const {
  const auto& list = out_[from];
  return std::binary_search(list.begin(), list.end(), to);
}

std::size_t FlowGraph::num_arcs() const {
  std::size_t n = 0;
  for (const auto& l : out_) n += l.size();
  return n;
}

FlowGraph build_graph(const Instance& inst, const PartialMatching& m, const ResourceClasses& classes) {
  FlowGraph g;
  const int n = inst.num_players();
  g.num_players_ = n;
  g.vertex_of_resource_.assign(inst.num_resources(), -1);
  for (ResourceId r : classes.fat) {
    g.vertex_of_resource_[r] = n + static_cast<int>(g.resource_of_vertex_.size());
    g.resource_of_vertex_.push_back(r);
  }
  g.out_.assign(n + g.resource_of_vertex_.size(), {});
  for (PlayerId p = 0; p < n; ++p) {
    const auto mine = m.fat_resource(p);
    for (ResourceId r : inst.interest(p)) {
      const int v = g.vertex_of_resource_[r];
      if (v < 0) continue;
      if (mine && *mine == r) {
        g.out_[v].push_back(p);
      } else {
        g.out_[p].push_back(v);
      }
    }
  }
  for (auto& list : g.out_) std::sort(list.begin(), list.end());
  return g;
}

std::vector<int> PathSolution::sources() const {
  std::vector<int> out;
  for (const auto& p : paths) out.push_back(p.front());
  return out;
}

std::vector<int> PathSolution::sinks() const {
  std::vector<int> out;
  for (const auto& p : paths) out.push_back(p.back());
  return out;
}

std::vector<int> PathSolution::vertices() const {
  std::vector<int> out;
  for (const auto& p : paths) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

DisjointPathFlow::DisjointPathFlow(const FlowGraph& g)
    : g_(&g),
      source_(2 * g.num_vertices()),
      sink_(2 * g.num_vertices() + 1),
      adj_(2 * g.num_vertices() + 2),
      source_arc_(g.num_vertices(), -1),
      sink_arc_(g.num_vertices(), -1) {
  for (int v = 0; v < g.num_vertices(); ++v) add_arc(in(v), outn(v));
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int w : g.out(v)) add_arc(outn(v), in(w));
  }
}

int DisjointPathFlow::add_arc(int from, int to) {
  const int fi = static_cast<int>(adj_[from].size());
  const int ti = static_cast<int>(adj_[to].size());
  adj_[from].push_back({to, 1, ti, true});
  adj_[to].push_back({from, 0, fi, false});
  return fi;
}

void DisjointPathFlow::push(int from, int arc_index) {
  Arc& a = adj_[from][arc_index];
  --a.cap;
  ++adj_[a.to][a.rev].cap;
}

void DisjointPathFlow::add_source(int v) {
  if (source_arc_[v] == -1) source_arc_[v] = add_arc(source_, in(v));
}

void DisjointPathFlow::add_sink(int v) {
  if (sink_arc_[v] == -1) {
    sink_arc_[v] = add_arc(outn(v), sink_);
    return;
  }
  Arc& a = adj_[outn(v)][sink_arc_[v]];
  if (!a.forward || a.cap == 0) {
    // re-enable a withdrawn sink (withdrawn sinks carry no flow)
    if (adj_[sink_][a.rev].cap == 0) {
      a.cap = 1;
      a.forward = true;
    }
  }
}

bool DisjointPathFlow::is_sink(int v) const {
  if (sink_arc_[v] == -1) return false;
  const Arc& a = adj_[outn(v)][sink_arc_[v]];
  return a.forward;
}

void DisjointPathFlow::load(const PathSolution& base) {
  auto find_arc = [&](int from, int to) {
    for (std::size_t i = 0; i < adj_[from].size(); ++i) {
      const Arc& a = adj_[from][i];
      if (a.to == to && a.forward && a.cap > 0) return static_cast<int>(i);
    }
    return -1;
  };
  for (const auto& path : base.paths) {
    if (path.empty()) throw std::invalid_argument("empty path in base solution");
    const int first = path.front();
    const int last = path.back();
    if (source_arc_[first] == -1 || adj_[source_][source_arc_[first]].cap == 0) {
      throw std::invalid_argument("base path starts at unavailable source " + std::to_string(first));
    }
    if (!is_sink(last) || adj_[outn(last)][sink_arc_[last]].cap == 0) {
      throw std::invalid_argument("base path ends at unavailable sink " + std::to_string(last));
    }
    std::vector<std::pair<int, int>> steps;
    steps.emplace_back(source_, source_arc_[first]);
    for (std::size_t k = 0; k < path.size(); ++k) {
      int internal = find_arc(in(path[k]), outn(path[k]));
      if (internal < 0) throw std::invalid_argument("base paths share vertex " + std::to_string(path[k]));
      steps.emplace_back(in(path[k]), internal);
      if (k + 1 < path.size()) {
        int hop = find_arc(outn(path[k]), in(path[k + 1]));
        if (hop < 0) {
          throw std::invalid_argument("base path uses missing arc " + std::to_string(path[k]) + "->" +
                                      std::to_string(path[k + 1]));
        }
        steps.emplace_back(outn(path[k]), hop);
      }
    }
    steps.emplace_back(outn(last), sink_arc_[last]);
    for (auto [from, idx] : steps) push(from, idx);
    ++value_;
  }
}

bool DisjointPathFlow::augment_once() {
  const int nodes = static_cast<int>(adj_.size());
  std::vector<int> parent(nodes, -1);
  std::vector<int> parent_arc(nodes, -1);
  std::deque<int> queue{source_};
  parent[source_] = source_;
  while (!queue.empty() && parent[sink_] == -1) {
    const int u = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < adj_[u].size(); ++i) {
      const Arc& a = adj_[u][i];
      if (a.cap > 0 && parent[a.to] == -1) {
        parent[a.to] = u;
        parent_arc[a.to] = static_cast<int>(i);
        if (a.to == sink_) break;
        queue.push_back(a.to);
      }
    }
  }
  if (parent[sink_] == -1) return false;
  for (int v = sink_; v != source_; v = parent[v]) push(parent[v], parent_arc[v]);
  ++value_;
  return true;
}

int DisjointPathFlow::augment() {
  int added = 0;
  while (augment_once()) ++added;
  return added;
}

bool DisjointPathFlow::try_sink(int v) {
  const bool was_sink = is_sink(v);
  add_sink(v);
  if (augment_once()) return true;
  if (!was_sink) {
    Arc& a = adj_[outn(v)][sink_arc_[v]];
    a.cap = 0;
    a.forward = false;
  }
  return false;
}

PathSolution DisjointPathFlow::paths() const {
  PathSolution sol;
  for (const Arc& s : adj_[source_]) {
    if (!s.forward || s.cap != 0) continue;
    std::vector<int> path;
    int v = s.to / 2;
    while (true) {
      path.push_back(v);
      int next = -1;
      for (const Arc& a : adj_[outn(v)]) {
        if (a.forward && a.cap == 0 && (a.to == sink_ || a.to % 2 == 0)) {
          next = a.to;
          break;
        }
      }
      if (next == -1) throw std::logic_error("flow conservation broken at vertex " + std::to_string(v));
      if (next == sink_) break;
      v = next / 2;
    }
    sol.paths.push_back(std::move(path));
  }
  return sol;
}

PathSolution max_disjoint_paths(const FlowGraph& g, std::span<const int> sources, std::span<const int> sinks) {
  DisjointPathFlow flow(g);
  for (int s : sources) flow.add_source(s);
  for (int t : sinks) flow.add_sink(t);
  flow.augment();
  return flow.paths();
}

PathSolution augment_from(const FlowGraph& g, const PathSolution& base, std::span<const int> sources,
                          std::span<const int> sinks) {
  DisjointPathFlow flow(g);
  for (int s : sources) flow.add_source(s);
  for (int t : sinks) flow.add_sink(t);
  flow.load(base);
  flow.augment();
  return flow.paths();
}

std::size_t CanonicalDecomposition::sinks_upto(int i) const {
  std::size_t n = 0;
  for (int k = 0; k <= i && k < layers(); ++k) n += sinks_by_layer[k].size();
  return n;
}

CanonicalDecomposition canonical_decomposition(const FlowGraph& g,
                                               const std::vector<std::vector<PlayerId>>& layer_players,
                                               std::span<const PlayerId> sinks) {
  const int layers = static_cast<int>(layer_players.size());
  DisjointPathFlow flow(g);
  for (PlayerId t : sinks) flow.add_sink(t);
  std::vector<int> layer_of(g.num_vertices(), -1);
  for (int i = 0; i < layers; ++i) {
    for (PlayerId p : layer_players[i]) {
      if (layer_of[p] != -1) continue;
      layer_of[p] = i;
      flow.add_source(p);
    }
    flow.augment();
  }
  CanonicalDecomposition d;
  d.sinks_by_layer.assign(layers, {});
  d.paths_by_layer.assign(layers, {});
  d.solution = flow.paths();
  for (const auto& path : d.solution.paths) {
    const int i = layer_of[path.front()];
    d.sinks_by_layer[i].push_back(path.back());
    d.paths_by_layer[i].paths.push_back(path);
  }
  return d;
}

PathSolution rerouted_solution(const FlowGraph& g, const CanonicalDecomposition& decomp,
                               const std::vector<std::vector<PlayerId>>& layer_players, int t,
                               std::span<const PlayerId> addable_sinks) {
  if (t < 1 || t >= decomp.layers()) throw std::invalid_argument("rerouted_solution needs 1 <= t <= l");
  DisjointPathFlow flow(g);
  PathSolution base;
  for (int i = 0; i < t; ++i) {
    for (PlayerId p : layer_players[i]) flow.add_source(p);
    for (PlayerId s : decomp.sinks_by_layer[i]) flow.add_sink(s);
    const auto& w = decomp.paths_by_layer[i].paths;
    base.paths.insert(base.paths.end(), w.begin(), w.end());
  }
  for (PlayerId a : addable_sinks) flow.add_sink(a);
  flow.load(base);
  flow.augment();
  PathSolution x = flow.paths();

  std::vector<bool> blocked(g.num_vertices(), false);
  for (int v : decomp.paths_by_layer[t].vertices()) blocked[v] = true;
  for (int v : x.vertices()) {
    if (blocked[v]) throw std::logic_error("rerouted solution meets W_t at vertex " + std::to_string(v));
  }
  return x;
}

}  // namespace fairalloc
