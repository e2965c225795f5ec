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

// Ascending auction on top of the Lyapunov descent engine.
//
// Overdemanded sets are the descent directions of the Lyapunov function and
// excess-demand sets are its (L,p)-minimal sets, so each auction strategy is
// a step-selection rule of lnat::minimize:
//
//   minimal overdemanded set        <-> minimal X with L(p + chi_X) < L(p)
//   maximal excess-demand set       <-> minimal minimizer of L(p + chi_X) - L(p)
//   (any) excess-demand set         <-> (L,p)-minimal set

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "walras/demand.hpp"
#include "walras/lnat.hpp"
#include "walras/lyapunov.hpp"

namespace walras {

// delta(X;p) > 0
inline bool is_overdemanded(ItemSet x, std::span<const Value> p, const Instance& inst, Budget budget = {}) {
  return deficiency(x, p, inst, budget) > 0;
}

// Unit:  |U(Z,p) & O(X,p)| > |Z|                      for every nonempty Z in X.
// Multi: sum_b (mu_b(X;p) - mu_b(X\Z;p)) > u(Z)       for every nonempty Z in X.
inline bool is_excess_demand(ItemSet x, std::span<const Value> p, const Instance& inst, Budget budget = {}) {
  if (x.empty()) return false;
  bool ok = true;
  if (inst.model() == Model::kUnit) {
    const UnitDemandProfile prof(inst, p);
    for_each_subset(x, [&](ItemSet z) {
      if (ok && !z.empty() && prof.count_meeting_within(z, x) <= static_cast<Value>(z.size())) ok = false;
    });
    return ok;
  }
  const MultiDemandProfile prof(inst, p, budget);
  std::vector<Value> mu_x(inst.m());
  for (std::size_t b = 0; b < inst.m(); ++b) mu_x[b] = prof.mu(b, x);
  for_each_subset(x, [&](ItemSet z) {
    if (!ok || z.empty()) return;
    Value gain = 0;
    for (std::size_t b = 0; b < inst.m(); ++b) gain += mu_x[b] - prof.mu(b, x - z);
    if (gain <= inst.supply_of(z)) ok = false;
  });
  return ok;
}

// ---------------------------------------------------------------------------
// Allocations

// item_of_bidder[b] is 0 for the artificial item, otherwise a 1-based item.
struct UnitAllocation {
  std::vector<std::size_t> item_of_bidder;
  bool operator==(const UnitAllocation&) const = default;
};

// One bundle per bidder, summing to u.
struct MultiAllocation {
  std::vector<Bundle> bundles;
  bool operator==(const MultiAllocation&) const = default;
};

using Allocation = std::variant<UnitAllocation, MultiAllocation>;

namespace detail {

class UnitMatcher {
 public:
  UnitMatcher(const Instance& inst, std::span<const Value> p) : prof_(inst, p), p_(p.begin(), p.end()) {
    const std::size_t n = inst.n(), m = inst.m();
    bidder_of_item_.assign(n, kNone);
    item_of_bidder_.assign(m, kNone);
    demanders_.resize(n);
    for (std::size_t b = 0; b < m; ++b)
      for (auto i : prof_.sets()[b].items.members()) demanders_[i].push_back(b);
  }

  std::optional<UnitAllocation> run() {
    const std::size_t n = p_.size(), m = item_of_bidder_.size();
    // Bidders that do not demand the artificial item must get a real one.
    for (std::size_t b = 0; b < m; ++b) {
      if (prof_.sets()[b].includes_null) continue;
      seen_.assign(n, false);
      if (!augment_from_bidder(b)) return std::nullopt;
    }
    // Priced items must be sold. Paths from the item side keep every matched
    // bidder matched; they may release an unpriced item.
    for (std::size_t i = 0; i < n; ++i) {
      if (p_[i] == 0 || bidder_of_item_[i] != kNone) continue;
      seen_.assign(m, false);
      if (!augment_from_item(i)) return std::nullopt;
    }
    UnitAllocation a;
    a.item_of_bidder.resize(m);
    for (std::size_t b = 0; b < m; ++b) a.item_of_bidder[b] = item_of_bidder_[b] == kNone ? 0 : item_of_bidder_[b] + 1;
    return a;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void assign(std::size_t b, std::size_t i) {
    bidder_of_item_[i] = b;
    item_of_bidder_[b] = i;
  }

  bool augment_from_bidder(std::size_t b) {
    for (auto i : prof_.sets()[b].items.members()) {
      if (seen_[i]) continue;
      seen_[i] = true;
      if (bidder_of_item_[i] == kNone || augment_from_bidder(bidder_of_item_[i])) {
        assign(b, i);
        return true;
      }
    }
    return false;
  }

  bool augment_from_item(std::size_t i) {
    for (auto b : demanders_[i]) {
      if (seen_[b]) continue;
      seen_[b] = true;
      const std::size_t held = item_of_bidder_[b];
      if (held == kNone || p_[held] == 0 || augment_from_item(held)) {
        if (held != kNone && bidder_of_item_[held] == b) bidder_of_item_[held] = kNone;
        assign(b, i);
        return true;
      }
    }
    return false;
  }

  UnitDemandProfile prof_;
  PriceVector p_;
  std::vector<std::vector<std::size_t>> demanders_;
  std::vector<std::size_t> bidder_of_item_;
  std::vector<std::size_t> item_of_bidder_;
  std::vector<bool> seen_;
};

// Depth-first search over D_1(p) x ... x D_m(p) for bundles summing to
// `target` (exactly, or at most `target` with slack only on free items when
// `allow_unsold`).
class BundleSearch {
 public:
  BundleSearch(const MultiDemandProfile& prof, Bundle target, std::span<const Value> p, bool allow_unsold,
               Budget budget)
      : sets_(prof.sets()), target_(std::move(target)), p_(p.begin(), p.end()), allow_unsold_(allow_unsold),
        budget_(budget) {
    const std::size_t m = sets_.size(), n = target_.size();
    reach_.assign(m + 1, Bundle(n, 0));
    for (std::size_t b = m; b-- > 0;) {
      reach_[b] = reach_[b + 1];
      for (std::size_t i = 0; i < n; ++i) {
        Value mx = 0;
        for (const auto& x : sets_[b]) mx = std::max(mx, x[i]);
        reach_[b][i] += mx;
      }
    }
  }

  std::optional<MultiAllocation> run() {
    chosen_.clear();
    if (dfs(0, target_)) return MultiAllocation{chosen_};
    return std::nullopt;
  }

 private:
  bool done(const Bundle& remaining) const {
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (remaining[i] != 0 && !(allow_unsold_ && p_[i] == 0)) return false;
    return true;
  }

  bool dfs(std::size_t b, const Bundle& remaining) {
    if (++nodes_ > budget_.limit) throw BudgetExceeded("allocation search: enumeration budget exceeded");
    if (b == sets_.size()) return done(remaining);
    if (!allow_unsold_) {
      for (std::size_t i = 0; i < remaining.size(); ++i)
        if (remaining[i] > reach_[b][i]) return false;
    }
    Bundle next(remaining.size());
    for (const auto& x : sets_[b]) {
      bool fits = true;
      for (std::size_t i = 0; i < x.size() && fits; ++i) {
        next[i] = remaining[i] - x[i];
        fits = next[i] >= 0;
      }
      if (!fits) continue;
      chosen_.push_back(x);
      if (dfs(b + 1, next)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const std::vector<std::vector<Bundle>>& sets_;
  Bundle target_;
  PriceVector p_;
  bool allow_unsold_;
  Budget budget_;
  std::vector<Bundle> reach_;  // componentwise max supply bidders b.. can absorb
  std::vector<Bundle> chosen_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

// An allocation certifying p as an equilibrium, or nullopt when none exists.
// Throws BudgetExceeded when the multi-model search runs out of budget.
inline std::optional<Allocation> extract_allocation(const Instance& inst, std::span<const Value> p,
                                                    Budget budget = {}) {
  require_prices(inst, p);
  if (inst.model() == Model::kUnit) {
    if (auto a = detail::UnitMatcher(inst, p).run()) return Allocation{*a};
    return std::nullopt;
  }
  const MultiDemandProfile prof(inst, p, budget);
  if (auto a = detail::BundleSearch(prof, inst.supply(), p, false, budget).run()) return Allocation{*a};
  return std::nullopt;
}

// Checks that `a` certifies p: every bidder gets a demanded item or bundle,
// and supply clears (unit model: unsold items are free).
inline bool certifies(const Instance& inst, std::span<const Value> p, const Allocation& a) {
  if (inst.model() == Model::kUnit) {
    const auto* ua = std::get_if<UnitAllocation>(&a);
    if (!ua || ua->item_of_bidder.size() != inst.m()) return false;
    const UnitDemandProfile prof(inst, p);
    std::vector<bool> sold(inst.n(), false);
    for (std::size_t b = 0; b < inst.m(); ++b) {
      const auto item = ua->item_of_bidder[b];
      const auto& d = prof.sets()[b];
      if (item == 0) {
        if (!d.includes_null) return false;
        continue;
      }
      if (item > inst.n() || !d.items.contains(item - 1) || sold[item - 1]) return false;
      sold[item - 1] = true;
    }
    for (std::size_t i = 0; i < inst.n(); ++i)
      if (!sold[i] && p[i] != 0) return false;
    return true;
  }
  const auto* ma = std::get_if<MultiAllocation>(&a);
  if (!ma || ma->bundles.size() != inst.m()) return false;
  Bundle total(inst.n(), 0);
  for (std::size_t b = 0; b < inst.m(); ++b) {
    const auto& x = ma->bundles[b];
    const auto& v = inst.valuations()[b];
    if (!v.in_box(x)) return false;
    const auto demand = demand_set(b, p, inst);
    if (std::find(demand.begin(), demand.end(), x) == demand.end()) return false;
    for (std::size_t i = 0; i < inst.n(); ++i) total[i] += x[i];
  }
  return total == inst.supply();
}

// A local improvement of the Lyapunov function: L(p + direction*chi_X) < L(p).
struct DescentWitness {
  ItemSet set;
  int direction;  // +1 or -1
};

struct EquilibriumVerdict {
  std::optional<Allocation> allocation;
  std::optional<DescentWitness> witness;
  bool is_equilibrium() const { return allocation.has_value(); }
};

// Equilibrium iff a certifying allocation exists. Otherwise reports a
// direction X with L(p + chi_X) < L(p) or L(p - chi_X) < L(p); such a
// direction always exists off the minimizer set of an L-natural function.
inline EquilibriumVerdict verify_equilibrium(const Instance& inst, std::span<const Value> p, Budget budget = {}) {
  EquilibriumVerdict out;
  out.allocation = extract_allocation(inst, p, budget);
  if (out.allocation) return out;

  const auto g = lyapunov_oracle(inst, budget);
  const StepTable up(g, p);
  if (auto x = minimal_descent_set(up)) {
    out.witness = DescentWitness{*x, +1};
    return out;
  }
  const Value base = g(p);
  for (auto x : subsets_by_cardinality(inst.n())) {
    if (x.empty()) continue;
    bool feasible = true;
    for (auto i : x.members()) feasible = feasible && p[i] > 0;
    if (feasible && g(shifted(p, x, -1)) < base) {
      out.witness = DescentWitness{x, -1};
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct StepDiagnostics {
  ItemSet chosen;
  Value deficiency;  // from demand primitives
  Value demand;      // |O(X,p)| or sum_b mu_b(X;p)
  Value supply;      // |X| or u(X)
};

enum class AllocationStatus { kFound, kNone, kBudgetExceeded };

struct AuctionResult {
  PriceVector p_min;
  Trajectory trajectory;
  std::vector<StepDiagnostics> diagnostics;
  std::optional<Allocation> allocation;
  AllocationStatus allocation_status = AllocationStatus::kNone;
};

// Ascending auction from p0 (default: zero prices). Explicit-table
// valuations are checked for M-natural concavity first.
inline AuctionResult ascending_auction(const Instance& inst, const Strategy& strategy,
                                       std::optional<PriceVector> p0 = std::nullopt, Budget budget = {}) {
  require_mnat_concave(inst, budget);
  const PriceVector start = p0 ? *p0 : PriceVector(inst.n(), 0);
  require_prices(inst, start);

  AuctionResult r;
  r.trajectory = minimize(lyapunov_oracle(inst, budget), start, strategy);
  r.p_min = r.trajectory.p_final;
  for (const auto& s : r.trajectory.steps) {
    StepDiagnostics d{s.chosen, 0, 0, inst.supply_of(s.chosen)};
    if (inst.model() == Model::kUnit) d.demand = UnitDemandProfile(inst, s.p_before).count_only(s.chosen);
    else d.demand = MultiDemandProfile(inst, s.p_before, budget).total_mu(s.chosen);
    d.deficiency = d.demand - d.supply;
    r.diagnostics.push_back(d);
  }
  try {
    r.allocation = extract_allocation(inst, r.p_min, budget);
    r.allocation_status = r.allocation ? AllocationStatus::kFound : AllocationStatus::kNone;
  } catch (const BudgetExceeded&) {
    r.allocation_status = AllocationStatus::kBudgetExceeded;
  }
  return r;
}

}  // namespace walras
