#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "fairalloc/edges.hpp"
#include "fairalloc/instance.hpp"

namespace fairalloc {

/// Resource-disjoint beta-edges for distinct players, with a reverse index
/// from resource to owning player.
class PartialMatching {
 public:
  PartialMatching() = default;
  PartialMatching(int num_players, int num_resources);

  int num_players() const { return static_cast<int>(slots_.size()); }

  bool matched(PlayerId p) const { return !std::holds_alternative<std::monostate>(slots_[p]); }
  bool fat_matched(PlayerId p) const { return std::holds_alternative<FatEdge>(slots_[p]); }
  bool thin_matched(PlayerId p) const { return std::holds_alternative<ThinEdge>(slots_[p]); }

  const ThinEdge* thin_edge(PlayerId p) const { return std::get_if<ThinEdge>(&slots_[p]); }
  std::optional<ResourceId> fat_resource(PlayerId p) const;

  /// -1 when unowned.
  PlayerId owner(ResourceId r) const { return owner_[r]; }

  /// Both throw std::logic_error if the player is already matched or a
  /// resource is already owned.
  void assign_fat(PlayerId p, ResourceId r);
  void assign_thin(ThinEdge edge);
  void unassign(PlayerId p);

  int size() const { return size_; }
  int fat_count() const { return fat_count_; }

  Allocation to_allocation() const;

  bool operator==(const PartialMatching& other) const { return slots_ == other.slots_; }

 private:
  std::vector<std::variant<std::monostate, FatEdge, ThinEdge>> slots_;
  std::vector<PlayerId> owner_;
  int size_ = 0;
  int fat_count_ = 0;
};

}  // namespace fairalloc
