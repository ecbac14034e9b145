#include "fairalloc/edges.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairalloc {

Params Params::from_epsilon(const Rational& epsilon, Rational tau) {
  if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
  constexpr std::int64_t grid = 1000;
  // 2(3 + sqrt 10) = 12.32455532...; (sqrt 10 - 2)/3 = 0.38742588...
  const long double base_beta = 6.0L + 2.0L * std::sqrt(10.0L);
  const long double base_gamma = (std::sqrt(10.0L) - 2.0L) / 3.0L;
  Params p;
  p.tau = tau;
  p.alpha = 2;
  Rational beta_floor(static_cast<std::int64_t>(std::floor(base_beta * grid)) + 1, grid);
  p.beta = beta_floor + epsilon;
  p.mu = epsilon / 100;
  p.delta = epsilon / 100;
  p.gamma = Rational(static_cast<std::int64_t>(std::floor(base_gamma * grid)), grid);
  return p;
}

ParamCheck validate_params(const Params& p) {
  ParamCheck c;
  std::vector<std::string> problems;
  if (!(p.beta > p.alpha)) problems.push_back("beta must exceed alpha");
  if (!(p.alpha >= 1)) problems.push_back("alpha must be >= 1");
  if (!(p.mu > 0 && p.mu < 1)) problems.push_back("mu must lie in (0, 1)");
  if (!(p.delta > 0 && p.delta < 1)) problems.push_back("delta must lie in (0, 1)");
  if (!(p.tau > 0)) problems.push_back("tau must be positive");
  if (!(p.gamma > 0)) problems.push_back("gamma must be positive");
  if (p.beta > p.alpha) {
    const Rational ab = p.alpha * p.beta;
    c.gamma_bound = (ab - (1 + p.mu) * (p.alpha + p.beta)) / (ab + p.alpha);
    c.growth_lhs = (2 * p.alpha / (p.beta - p.alpha)) * (1 + p.delta);
    c.growth_rhs = p.gamma - (1 + p.delta) * p.mu;
    if (p.gamma > c.gamma_bound) {
      problems.push_back("gamma " + to_string(p.gamma) + " exceeds bound " + to_string(c.gamma_bound));
    }
    if (c.growth_lhs > c.growth_rhs) {
      problems.push_back("growth inequality fails: " + to_string(c.growth_lhs) + " > " + to_string(c.growth_rhs));
    }
  }
  c.ok = problems.empty();
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (i) c.diagnostic += "; ";
    c.diagnostic += problems[i];
  }
  return c;
}

ResourceClasses classify_resources(const Instance& inst, const Params& p) {
  ResourceClasses rc;
  rc.is_fat.assign(inst.num_resources(), false);
  for (ResourceId r = 0; r < inst.num_resources(); ++r) {
    if (at_least(inst.value(r), p.tau / p.beta)) {
      rc.is_fat[r] = true;
      rc.fat.push_back(r);
    } else {
      rc.thin.push_back(r);
    }
  }
  return rc;
}

std::optional<std::vector<ResourceId>> minimal_prefix(std::span<const ResourceId> resources, const Rational& target,
                                                      const Instance& inst) {
  std::vector<ResourceId> order;
  order.reserve(resources.size());
  Value total = 0;
  for (ResourceId r : resources) {
    if (inst.value(r) > 0) {
      order.push_back(r);
      total += inst.value(r);
    }
  }
  if (!at_least(total, target)) return std::nullopt;
  std::sort(order.begin(), order.end(), [&](ResourceId a, ResourceId b) {
    if (inst.value(a) != inst.value(b)) return inst.value(a) > inst.value(b);
    return a < b;
  });
  Value sum = 0;
  std::size_t k = 0;
  while (!at_least(sum, target)) sum += inst.value(order[k++]);
  order.resize(k);
  return order;
}

std::optional<ThinEdge> build_minimal_thin_edge(PlayerId player, const Rational& tau, const Rational& delta_class,
                                                std::span<const ResourceId> available, const Instance& inst) {
  auto prefix = minimal_prefix(available, tau / delta_class, inst);
  if (!prefix) return std::nullopt;
  ThinEdge e;
  e.player = player;
  e.resources = std::move(*prefix);
  for (ResourceId r : e.resources) e.value += inst.value(r);
  e.delta_class = delta_class;
  return e;
}

std::optional<std::vector<ResourceId>> beta_minimal_subset(std::span<const ResourceId> resources, const Params& p,
                                                           const std::function<bool(ResourceId)>& excluded,
                                                           const Instance& inst) {
  std::vector<ResourceId> kept;
  kept.reserve(resources.size());
  for (ResourceId r : resources) {
    if (!excluded || !excluded(r)) kept.push_back(r);
  }
  return minimal_prefix(kept, p.tau / p.beta, inst);
}

}  // namespace fairalloc
