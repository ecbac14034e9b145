#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairalloc/instance.hpp"
#include "fairalloc/rational.hpp"

namespace fairalloc {

/// Algorithm constants. All comparisons against them are exact.
///
///   alpha  greediness of players in the tree (addable edges need tau/alpha)
///   beta   approximation target (matched edges need tau/beta)
///   mu     a layer collapses once |I_i| >= mu |P_i|
///   delta  minimum per-layer growth |P_i| >= delta |P_{<i}|
///   gamma  abort once a new layer has d < gamma |P_{<=l}|
struct Params {
  Rational tau{1};
  Rational alpha{2};
  Rational beta{13};
  Rational mu{1, 150};
  Rational delta{1, 150};
  Rational gamma{3, 8};

  static Params defaults(Rational tau = Rational(1)) {
    Params p;
    p.tau = tau;
    return p;
  }

  /// Rational constants close to the epsilon schedule: beta rounded up from
  /// 2(3 + sqrt 10) + eps, mu = delta = eps/100, gamma rounded down from
  /// (sqrt 10 - 2)/3. Requires 0 < eps <= 1. The result still has to pass
  /// validate_params.
  static Params from_epsilon(const Rational& epsilon, Rational tau = Rational(1));
};

struct ParamCheck {
  bool ok = false;
  /// (alpha beta - (1 + mu)(alpha + beta)) / (alpha beta + alpha); gamma must not exceed it.
  Rational gamma_bound;
  /// 2 alpha / (beta - alpha) * (1 + delta) <= gamma - (1 + delta) mu.
  Rational growth_lhs;
  Rational growth_rhs;
  std::string diagnostic;
};

ParamCheck validate_params(const Params& p);

struct ResourceClasses {
  std::vector<ResourceId> fat;
  std::vector<ResourceId> thin;
  std::vector<bool> is_fat;
};

/// Fat iff beta * v >= tau.
ResourceClasses classify_resources(const Instance& inst, const Params& p);

struct ThinEdge {
  PlayerId player = -1;
  std::vector<ResourceId> resources;  // in scan order (descending value, ascending id)
  Value value = 0;
  Rational delta_class;

  bool operator==(const ThinEdge&) const = default;
};

struct FatEdge {
  PlayerId player = -1;
  ResourceId resource = -1;

  bool operator==(const FatEdge&) const = default;
};

/// Greedy prefix of `resources` sorted by descending value (ties by id) that
/// first reaches `target`. Zero-value resources are skipped. Every element of
/// such a prefix is worth at least the last one, so dropping any single
/// resource falls below the target.
std::optional<std::vector<ResourceId>> minimal_prefix(std::span<const ResourceId> resources, const Rational& target,
                                                      const Instance& inst);

/// Minimal thin edge of class `delta_class` (target tau / delta_class) for
/// `player` from `available`, or nullopt if their total value falls short.
std::optional<ThinEdge> build_minimal_thin_edge(PlayerId player, const Rational& tau, const Rational& delta_class,
                                                std::span<const ResourceId> available, const Instance& inst);

/// Minimal subset of `resources` minus the excluded ones worth >= tau/beta.
std::optional<std::vector<ResourceId>> beta_minimal_subset(std::span<const ResourceId> resources, const Params& p,
                                                           const std::function<bool(ResourceId)>& excluded,
                                                           const Instance& inst);

}  // namespace fairalloc
