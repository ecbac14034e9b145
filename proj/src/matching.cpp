#include "fairalloc/matching.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fairalloc {

PartialMatching::PartialMatching(int num_players, int num_resources)
    : slots_(num_players), owner_(num_resources, -1) {}

std::optional<ResourceId> PartialMatching::fat_resource(PlayerId p) const {
  if (const auto* e = std::get_if<FatEdge>(&slots_[p])) return e->resource;
  return std::nullopt;
}

void PartialMatching::assign_fat(PlayerId p, ResourceId r) {
  if (matched(p)) throw std::logic_error("player " + std::to_string(p) + " already matched");
  if (owner_[r] != -1) throw std::logic_error("resource " + std::to_string(r) + " already owned");
  slots_[p] = FatEdge{p, r};
  owner_[r] = p;
  ++size_;
  ++fat_count_;
}

void PartialMatching::assign_thin(ThinEdge edge) {
  const PlayerId p = edge.player;
  if (matched(p)) throw std::logic_error("player " + std::to_string(p) + " already matched");
  for (ResourceId r : edge.resources) {
    if (owner_[r] != -1) throw std::logic_error("resource " + std::to_string(r) + " already owned");
  }
  for (ResourceId r : edge.resources) owner_[r] = p;
  slots_[p] = std::move(edge);
  ++size_;
}

void PartialMatching::unassign(PlayerId p) {
  if (auto* f = std::get_if<FatEdge>(&slots_[p])) {
    owner_[f->resource] = -1;
    --fat_count_;
    --size_;
  } else if (auto* t = std::get_if<ThinEdge>(&slots_[p])) {
    for (ResourceId r : t->resources) owner_[r] = -1;
    --size_;
  }
  slots_[p] = std::monostate{};
}

Allocation PartialMatching::to_allocation() const {
  Allocation a;
  a.bundles.resize(slots_.size());
  for (PlayerId p = 0; p < num_players(); ++p) {
    if (const auto* f = std::get_if<FatEdge>(&slots_[p])) {
      a.bundles[p] = {f->resource};
    } else if (const auto* t = std::get_if<ThinEdge>(&slots_[p])) {
      a.bundles[p] = t->resources;
      std::sort(a.bundles[p].begin(), a.bundles[p].end());
    }
  }
  return a;
}

}  // namespace fairalloc
