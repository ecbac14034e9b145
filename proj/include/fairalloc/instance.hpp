#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairalloc/rational.hpp"

namespace fairalloc {

using PlayerId = int;
using ResourceId = int;

/// Restricted max-min allocation instance: every resource has a single value
/// and a player either wants it (and values it at that) or values it at 0.
/// Immutable once constructed.
class Instance {
 public:
  Instance() = default;

  /// `interest[p]` lists the resources player p wants. Throws
  /// std::invalid_argument on negative values, unknown or repeated ids.
  Instance(std::vector<Value> values, std::vector<std::vector<ResourceId>> interest);

  int num_players() const { return static_cast<int>(interest_.size()); }
  int num_resources() const { return static_cast<int>(values_.size()); }

  Value value(ResourceId r) const { return values_[r]; }
  const std::vector<Value>& values() const { return values_; }

  /// Sorted ascending.
  std::span<const ResourceId> interest(PlayerId p) const { return interest_[p]; }
  std::span<const PlayerId> interested_players(ResourceId r) const { return interested_[r]; }
  bool interested(PlayerId p, ResourceId r) const;

  /// Value of a bundle to player p (resources outside p's interest count 0).
  Value value_for(PlayerId p, std::span<const ResourceId> bundle) const;
  Value total_value() const;

  bool operator==(const Instance& other) const {
    return values_ == other.values_ && interest_ == other.interest_;
  }

 private:
  std::vector<Value> values_;
  std::vector<std::vector<ResourceId>> interest_;
  std::vector<std::vector<PlayerId>> interested_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error(message + " at line " + std::to_string(line)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Text format:
///   <num_players> <num_resources>
///   <v_0> ... <v_{m-1}>
///   <player-id>: <resource-ids...>      (one line per player, missing = no interest)
/// Lines starting with '#' and blank lines are ignored.
Instance parse_instance(std::string_view text);
std::string write_instance(const Instance& inst);

/// Like parse_instance but accepts rational values ("3/4", "0.5"); all values
/// are multiplied by the LCM of their denominators.
struct ScaledInstance {
  Instance instance;
  std::int64_t scale = 1;
};
ScaledInstance parse_instance_scaled(std::string_view text);

/// Deterministic random instance. The generator is std::mt19937_64 seeded with
/// `seed`; it draws all values first (1 + x mod value_max), then one interest
/// coin per (player, resource) pair in row-major order, where a coin is
/// (x >> 11) * 2^-53 < interest_prob.
Instance generate_random(int players, int resources, Value value_max, double interest_prob,
                         std::uint64_t seed);

struct Allocation {
  std::vector<std::vector<ResourceId>> bundles;

  bool operator==(const Allocation&) const = default;
};

class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws AllocationError if bundles overlap, reference unknown ids, or hand a
/// player a resource it does not want.
void validate_allocation(const Instance& inst, const Allocation& alloc);

/// Minimum bundle value over all players. Throws AllocationError on an
/// invalid allocation.
Value allocation_min_value(const Instance& inst, const Allocation& alloc);

/// True iff the allocation is valid and every bundle is worth >= threshold.
bool verify_allocation(const Instance& inst, const Allocation& alloc, const Rational& threshold);

/// "<player-id>: <resource-ids>" per line; players without a line get nothing.
Allocation parse_allocation(std::string_view text, int num_players);
std::string write_allocation(const Allocation& alloc);

}  // namespace fairalloc
