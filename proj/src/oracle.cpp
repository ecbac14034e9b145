#include "fairalloc/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace fairalloc::oracle {

Value brute_force_opt(const Instance& inst) {
  const int n = inst.num_players();
  const int m = inst.num_resources();
  if (n > kMaxOptPlayers || m > kMaxOptResources) {
    throw SizeGuardExceeded("brute force is limited to " + std::to_string(kMaxOptPlayers) + " players and " +
                            std::to_string(kMaxOptResources) + " resources");
  }
  if (n == 0) return 0;
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<std::vector<Value>> worth(n, std::vector<Value>(full + 1, 0));
  for (int p = 0; p < n; ++p) {
    for (std::size_t s = 1; s <= full; ++s) {
      const int low = __builtin_ctzll(s);
      worth[p][s] = worth[p][s & (s - 1)] + (inst.interested(p, low) ? inst.value(low) : 0);
    }
  }
  std::vector<Value> best = worth[0];
  for (int p = 1; p < n; ++p) {
    std::vector<Value> next(full + 1, 0);
    for (std::size_t s = 0; s <= full; ++s) {
      Value b = std::min(best[s], worth[p][0]);
      for (std::size_t t = s; t; t = (t - 1) & s) b = std::max(b, std::min(best[s ^ t], worth[p][t]));
      next[s] = b;
    }
    best = std::move(next);
  }
  return best[full];
}

namespace {

struct PathSearch {
  const FlowGraph& g;
  std::vector<int> sources;
  std::vector<bool> is_sink;
  std::vector<bool> used;
  int best = 0;

  void solve(std::size_t i, int count) {
    const int remaining = static_cast<int>(sources.size() - i);
    if (count + remaining <= best) return;
    if (i == sources.size()) {
      best = std::max(best, count);
      return;
    }
    const int s = sources[i];
    if (!used[s]) {
      used[s] = true;
      walk(s, i, count);
      used[s] = false;
    }
    solve(i + 1, count);
  }

  // Extends the path ending at v (already marked used) in every way.
  void walk(int v, std::size_t i, int count) {
    if (is_sink[v]) solve(i + 1, count + 1);
    for (int w : g.out(v)) {
      if (used[w]) continue;
      used[w] = true;
      walk(w, i, count);
      used[w] = false;
    }
  }
};

}  // namespace

int brute_force_disjoint_paths(const FlowGraph& g, std::span<const int> sources, std::span<const int> sinks) {
  if (g.num_vertices() > kMaxPathVertices) {
    throw SizeGuardExceeded("exhaustive path search is limited to " + std::to_string(kMaxPathVertices) + " vertices");
  }
  PathSearch search{g, {}, std::vector<bool>(g.num_vertices(), false), std::vector<bool>(g.num_vertices(), false)};
  for (int s : sources) {
    if (std::find(search.sources.begin(), search.sources.end(), s) == search.sources.end()) search.sources.push_back(s);
  }
  for (int t : sinks) search.is_sink[t] = true;
  search.solve(0, 0);
  return search.best;
}

bool is_minimal_edge(const ThinEdge& edge, const Rational& target, const Instance& inst) {
  Value total = 0;
  for (ResourceId r : edge.resources) total += inst.value(r);
  auto reaches = [&](Value v) { return Rational(v) >= target; };
  if (!reaches(total)) return false;
  return std::none_of(edge.resources.begin(), edge.resources.end(),
                      [&](ResourceId r) { return reaches(total - inst.value(r)); });
}

}  // namespace fairalloc::oracle
