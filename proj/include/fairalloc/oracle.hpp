#pragma once

#include <span>
#include <stdexcept>

#include "fairalloc/edges.hpp"
#include "fairalloc/flownet.hpp"
#include "fairalloc/instance.hpp"

namespace fairalloc::oracle {

class SizeGuardExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxOptPlayers = 6;
inline constexpr int kMaxOptResources = 14;
inline constexpr int kMaxPathVertices = 10;

/// Exact optimum by dynamic programming over resource subsets:
/// f_k(S) = max over T subset of S of min(f_{k-1}(S \ T), value_k(T)).
Value brute_force_opt(const Instance& inst);

/// Maximum number of vertex-disjoint source -> sink paths by exhaustive
/// search over path sets.
int brute_force_disjoint_paths(const FlowGraph& g, std::span<const int> sources, std::span<const int> sinks);

/// Worth at least `target`, and removing any one resource drops below it.
bool is_minimal_edge(const ThinEdge& edge, const Rational& target, const Instance& inst);

}  // namespace fairalloc::oracle
