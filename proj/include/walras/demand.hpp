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

// Demand oracles.
//
// Unit model: each bidder picks items from N plus the artificial item 0
// (price 0, value 0). Multi model: each bidder picks bundles in [0, u]. The
// two paths share no code; item 0 exists only on the unit side.

#pragma once

#include <vector>

#include "walras/instance.hpp"

namespace walras {

using BidderSet = std::vector<std::size_t>;

inline void require_prices(const Instance& inst, std::span<const Value> p) {
  if (p.size() != inst.n())
    throw DomainError("price vector has " + std::to_string(p.size()) + " components, expected " +
                      std::to_string(inst.n()));
  for (auto pi : p)
    if (pi < 0) throw DomainError("prices must be nonnegative: " + to_string(p));
}

inline void require_unit(const Instance& inst, const char* op) {
  if (inst.model() != Model::kUnit) throw DomainError(std::string(op) + " requires the unit model");
}

inline void require_multi(const Instance& inst, const char* op) {
  if (inst.model() != Model::kMulti) throw DomainError(std::string(op) + " requires the multi model");
}

// ---------------------------------------------------------------------------
// Unit model

// argmax { v_b(i) - p(i) : i in N + {0} }, with the artificial item kept
// apart from the real ones.
struct UnitDemandSet {
  bool includes_null = false;
  ItemSet items;

  // Only items of Y demanded; item 0 never lies in Y.
  bool within(ItemSet y) const { return !includes_null && items.subset_of(y); }
  bool meets(ItemSet y) const { return items.intersects(y); }
  bool operator==(const UnitDemandSet&) const = default;
};

namespace detail {

inline UnitDemandSet unit_demand_unchecked(const Instance& inst, std::size_t b,
                                           std::span<const Value> p) {
  const auto& vals = std::get<UnitDemandFamily>(inst.valuations()[b].payload()).values;
  Value best = 0;  // artificial item
  for (std::size_t i = 0; i < p.size(); ++i) best = std::max(best, vals[i] - p[i]);
  UnitDemandSet d;
  d.includes_null = best == 0;
  ItemSet::Mask mask = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (vals[i] - p[i] == best) mask |= ItemSet::Mask{1} << i;
  d.items = ItemSet(mask);
  return d;
}

}  // namespace detail

inline UnitDemandSet unit_demand_set(std::size_t b, std::span<const Value> p, const Instance& inst) {
  require_unit(inst, "unit_demand_set");
  require_prices(inst, p);
  inst.valuation(b);
  return detail::unit_demand_unchecked(inst, b, p);
}

// Demand sets of every bidder at one price; O(Y,p) and U(Y,p) queries are
// then bit operations.
class UnitDemandProfile {
 public:
  UnitDemandProfile(const Instance& inst, std::span<const Value> p) {
    require_unit(inst, "UnitDemandProfile");
    require_prices(inst, p);
    sets_.reserve(inst.m());
    for (std::size_t b = 0; b < inst.m(); ++b) sets_.push_back(detail::unit_demand_unchecked(inst, b, p));
  }

  const std::vector<UnitDemandSet>& sets() const { return sets_; }

  BidderSet only_demanding(ItemSet y) const {
    BidderSet out;
    for (std::size_t b = 0; b < sets_.size(); ++b)
      if (sets_[b].within(y)) out.push_back(b);
    return out;
  }

  BidderSet demanding_some(ItemSet y) const {
    BidderSet out;
    for (std::size_t b = 0; b < sets_.size(); ++b)
      if (sets_[b].meets(y)) out.push_back(b);
    return out;
  }

  // |O(Y,p)|
  Value count_only(ItemSet y) const {
    Value c = 0;
    for (const auto& d : sets_) c += d.within(y);
    return c;
  }

  // |U(Z,p) & O(X,p)|
  Value count_meeting_within(ItemSet z, ItemSet x) const {
    Value c = 0;
    for (const auto& d : sets_) c += d.within(x) && d.meets(z);
    return c;
  }

 private:
  std::vector<UnitDemandSet> sets_;
};

// O(Y,p): bidders whose whole demand set lies in Y.
inline BidderSet bidders_only_demanding(ItemSet y, std::span<const Value> p, const Instance& inst) {
  return UnitDemandProfile(inst, p).only_demanding(y);
}

// U(Y,p): bidders demanding at least one item of Y.
inline BidderSet bidders_demanding_some(ItemSet y, std::span<const Value> p, const Instance& inst) {
  return UnitDemandProfile(inst, p).demanding_some(y);
}

// ---------------------------------------------------------------------------
// Multi model

inline Value payoff(const Valuation& v, std::span<const Value> p, std::span<const Value> x) {
  return checked_sub(v.value_unchecked(x), dot(p, x));
}

// D_b(p) by exhaustive enumeration of [0, u], in odometer order.
inline std::vector<Bundle> demand_set(std::size_t b, std::span<const Value> p, const Instance& inst,
                                      Budget budget = {}) {
  require_multi(inst, "demand_set");
  require_prices(inst, p);
  const auto& v = inst.valuation(b);
  const Bundle zero(inst.n(), 0);
  budget.require(box_volume(zero, inst.supply()), "demand_set");
  std::vector<Bundle> best;
  Value best_payoff = 0;
  for_each_in_box(zero, inst.supply(), [&](const Bundle& x) {
    const Value f = payoff(v, p, x);
    if (best.empty() || f > best_payoff) {
      best.clear();
      best.push_back(x);
      best_payoff = f;
    } else if (f == best_payoff) {
      best.push_back(x);
    }
  });
  return best;
}

inline Value units_in(std::span<const Value> x, ItemSet s) {
  Value t = 0;
  for (auto i : s.members()) t += x[i];
  return t;
}

inline Value min_units_in(const std::vector<Bundle>& demand, ItemSet s) {
  Value best = kPlusInfinity;
  for (const auto& y : demand) best = std::min(best, units_in(y, s));
  return best;
}

// mu_b(X;p) = min { y(X) : y in D_b(p) }.
inline Value mu(std::size_t b, ItemSet x, std::span<const Value> p, const Instance& inst,
                Budget budget = {}) {
  return min_units_in(demand_set(b, p, inst, budget), x);
}

// All bidders' demand sets at one price.
class MultiDemandProfile {
 public:
  MultiDemandProfile(const Instance& inst, std::span<const Value> p, Budget budget = {}) {
    require_multi(inst, "MultiDemandProfile");
    sets_.reserve(inst.m());
    for (std::size_t b = 0; b < inst.m(); ++b) sets_.push_back(demand_set(b, p, inst, budget));
  }

  const std::vector<std::vector<Bundle>>& sets() const { return sets_; }

  Value mu(std::size_t b, ItemSet x) const { return min_units_in(sets_[b], x); }

  Value total_mu(ItemSet x) const {
    Value s = 0;
    for (std::size_t b = 0; b < sets_.size(); ++b) s += mu(b, x);
    return s;
  }

 private:
  std::vector<std::vector<Bundle>> sets_;
};

// ---------------------------------------------------------------------------
// Fast path for M-natural concave valuations: local search over the moves
// +chi_i, -chi_j, +chi_i-chi_j from the zero bundle. A local maximum of an
// M-natural concave function is global.

namespace detail {

template <typename F>
Bundle ascend(std::span<const Value> u, F&& f) {
  const std::size_t n = u.size();
  Bundle x(n, 0);
  Value fx = f(x);
  while (true) {
    Value best = fx;
    Bundle best_x;
    auto consider = [&](Bundle& y) {
      const Value fy = f(y);
      if (fy > best) {
        best = fy;
        best_x = y;
      }
    };
    Bundle y = x;
    // i, j range over {0..n}; index n stands for "no item".
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        if (i == j) continue;
        if (i < n && x[i] >= u[i]) continue;
        if (j < n && x[j] <= 0) continue;
        if (i < n) ++y[i];
        if (j < n) --y[j];
        consider(y);
        if (i < n) --y[i];
        if (j < n) ++y[j];
      }
    }
    if (best_x.empty()) return x;
    x = std::move(best_x);
    fx = best;
  }
}

}  // namespace detail

// One payoff-maximizing bundle; valid only for M-natural concave v.
inline Bundle greedy_demand_bundle(const Valuation& v, std::span<const Value> p) {
  return detail::ascend(v.box(), [&](const Bundle& x) { return payoff(v, p, x); });
}

// mu via the perturbed payoff K*(v(x) - p.x) - x(X), K > u(X): its maximizers
// are the demanded bundles with the fewest units in X.
inline Value mu_by_perturbation(const Valuation& v, ItemSet x, std::span<const Value> p) {
  const Value k = checked_add(units_in(v.box(), x), 1);
  const auto y = detail::ascend(v.box(), [&](const Bundle& b) {
    return checked_sub(checked_mul(k, payoff(v, p, b)), units_in(b, x));
  });
  return units_in(y, x);
}

}  // namespace walras
