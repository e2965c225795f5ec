// Copyright 2026 The Walras Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force ground truth over the price box [0, cap].

#pragma once

#include <vector>

#include "walras/auction.hpp"
#include "walras/lyapunov.hpp"

namespace walras {

// Every component equals max_b v_b(u). Beyond it nobody demands the item,
// so L grows by u(i) per unit of p(i) and no minimizer lies outside.
inline PriceVector price_cap(const Instance& inst) {
  Value cap = 0;
  for (const auto& v : inst.valuations()) cap = std::max(cap, v(inst.supply()));
  return PriceVector(inst.n(), cap);
}

// All global minimizers of L on [0, cap], in odometer order.
inline std::vector<PriceVector> all_lyapunov_minimizers(const Instance& inst, Budget budget = {}) {
  const PriceVector lower(inst.n(), 0), upper = price_cap(inst);
  budget.require(box_volume(lower, upper), "all_lyapunov_minimizers");
  std::vector<PriceVector> out;
  Value best = kPlusInfinity;
  for_each_in_box(lower, upper, [&](const PriceVector& p) {
    const Value l = lyapunov(p, inst, budget);
    if (l < best) {
      best = l;
      out.clear();
    }
    if (l == best) out.push_back(p);
  });
  return out;
}

enum class EquilibriumDefinition {
  kExactClearing,  // bundles from demand sets summing to u exactly
  kUnsoldFree,     // sum <= u, items left over are priced at zero
};

// Does some allocation support p under the given definition? Unit instances
// are checked through their multi-model view for kExactClearing and through
// bipartite matching for kUnsoldFree.
inline bool supports_equilibrium(const Instance& inst, std::span<const Value> p, EquilibriumDefinition def,
                                 Budget budget = {}) {
  if (inst.model() == Model::kUnit) {
    if (def == EquilibriumDefinition::kUnsoldFree) return detail::UnitMatcher(inst, p).run().has_value();
    const auto multi = inst.as_multi();
    return detail::BundleSearch(MultiDemandProfile(multi, p, budget), multi.supply(), p, false, budget)
        .run()
        .has_value();
  }
  const bool unsold = def == EquilibriumDefinition::kUnsoldFree;
  return detail::BundleSearch(MultiDemandProfile(inst, p, budget), inst.supply(), p, unsold, budget)
      .run()
      .has_value();
}

// Equilibrium prices in [0, cap] straight from the definition.
inline std::vector<PriceVector> equilibrium_prices(const Instance& inst, EquilibriumDefinition def,
                                                   Budget budget = {}) {
  const PriceVector lower(inst.n(), 0), upper = price_cap(inst);
  budget.require(box_volume(lower, upper), "equilibrium_prices");
  std::vector<PriceVector> out;
  for_each_in_box(lower, upper, [&](const PriceVector& p) {
    if (supports_equilibrium(inst, p, def, budget)) out.push_back(p);
  });
  return out;
}

// Price boxes up to this volume also get the definitional cross-check.
inline constexpr std::uint64_t kDefinitionCheckVolume = 1000;

// Minimal equilibrium price: the meet of all Lyapunov minimizers, which must
// itself be a minimizer.
inline PriceVector brute_force_min_equilibrium(const Instance& inst, Budget budget = {}) {
  const auto mins = all_lyapunov_minimizers(inst, budget);
  PriceVector low = mins.front();
  for (const auto& p : mins) low = meet(low, p);
  if (std::find(mins.begin(), mins.end(), low) == mins.end())
    throw NotLNaturalConvex("minimizer set not meet-closed: " + to_string(low) + " is not a minimizer");

  const PriceVector zero(inst.n(), 0);
  // With no bidders the exact-clearing definition has no equilibrium at all.
  if (inst.m() > 0 && box_volume(zero, price_cap(inst)) <= kDefinitionCheckVolume) {
    for (auto def : {EquilibriumDefinition::kExactClearing, EquilibriumDefinition::kUnsoldFree})
      if (equilibrium_prices(inst, def, budget) != mins)
        throw ContractViolation("equilibrium prices by definition differ from the Lyapunov minimizers");
  }
  return low;
}

}  // namespace walras
