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

// Unit-step descent for L-natural convex functions on Z^n.
//
// From a start point below the minimal minimizer, repeatedly add the
// indicator vector of a set X with g(p + chi_X) < g(p) until no such X is
// left. When every chosen X is (g,p)-minimal, i.e.
//
//   g(p + chi_Y) > g(p + chi_X)  for all Y strictly inside X,
//
// the iterates never pass the minimal minimizer and the loop stops on it.
// The selection rules below all produce (g,p)-minimal sets.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "walras/core.hpp"
#include "walras/item_set.hpp"
#include "walras/lyapunov.hpp"

namespace walras {

// Integer function on Z^n, +infinity outside [lower, upper].
struct FunctionOracle {
  std::function<Value(std::span<const Value>)> eval;
  PriceVector lower;
  PriceVector upper;
  // Known lower bound on g, if any; used to size the default iteration cap.
  std::optional<Value> lower_bound;

  std::size_t dim() const { return lower.size(); }

  bool in_domain_box(std::span<const Value> p) const {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < lower[i] || p[i] > upper[i]) return false;
    return true;
  }

  Value operator()(std::span<const Value> p) const {
    return in_domain_box(p) ? eval(p) : kPlusInfinity;
  }
};

// Upper bound used for coordinates without a finite domain limit.
inline constexpr Value kUnboundedCoordinate = kPlusInfinity / 4;

// The auction's Lyapunov function as a function oracle on Z^n_+.
inline FunctionOracle lyapunov_oracle(const Instance& inst, Budget budget = {}, bool memoize = true) {
  auto oracle = std::make_shared<LyapunovOracle>(inst, budget, memoize);
  return FunctionOracle{[oracle](std::span<const Value> p) { return (*oracle)(p); },
                        PriceVector(inst.n(), 0), PriceVector(inst.n(), kUnboundedCoordinate), Value{0}};
}

struct Box {
  PriceVector lower;
  PriceVector upper;
};

// Failure of g(p) + g(q) >= g((p + l1) ^ q) + g(p v (q - l1)).
struct LatticeViolation {
  PriceVector p;
  PriceVector q;
  Value lambda;
};

// Exhaustive discrete midpoint check over all pairs of the box and all
// lambda in 0..diameter. Costs volume^2 * (diameter + 1) comparisons.
inline Verdict<LatticeViolation> is_lnat_convex_on_box(const FunctionOracle& g, const Box& box,
                                                       Budget budget = {}) {
  const std::size_t n = box.lower.size();
  const auto vol = box_volume(box.lower, box.upper);
  Value diameter = 0;
  for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, box.upper[i] - box.lower[i]);
  budget.require(saturating_mul(saturating_mul(vol, vol), static_cast<std::uint64_t>(diameter) + 1),
                 "is_lnat_convex_on_box");

  std::vector<PriceVector> points;
  std::vector<Value> values;
  for_each_in_box(box.lower, box.upper, [&](const PriceVector& p) {
    points.push_back(p);
    values.push_back(g(p));
  });
  std::vector<std::size_t> strides(n);
  std::size_t stride = 1;
  for (std::size_t i = 0; i < n; ++i) {
    strides[i] = stride;
    stride *= static_cast<std::size_t>(box.upper[i] - box.lower[i] + 1);
  }
  auto index_of = [&](auto&& coord) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx += static_cast<std::size_t>(coord(i) - box.lower[i]) * strides[i];
    return idx;
  };

  for (std::size_t a = 0; a < points.size(); ++a) {
    if (values[a] == kPlusInfinity) continue;
    const auto& p = points[a];
    for (std::size_t b = 0; b < points.size(); ++b) {
      if (values[b] == kPlusInfinity) continue;
      const auto& q = points[b];
      const __int128 lhs = static_cast<__int128>(values[a]) + values[b];
      for (Value lam = 0; lam <= diameter; ++lam) {
        const auto lo = index_of([&](std::size_t i) { return std::min(p[i] + lam, q[i]); });
        const auto hi = index_of([&](std::size_t i) { return std::max(p[i], q[i] - lam); });
        if (values[lo] == kPlusInfinity || values[hi] == kPlusInfinity ||
            lhs < static_cast<__int128>(values[lo]) + values[hi])
          return {LatticeViolation{p, q, lam}};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Values g(p + chi_X) for every X, indexed by mask.

class StepTable {
 public:
  StepTable(const FunctionOracle& g, std::span<const Value> p) : n_(p.size()) {
    require_item_count(n_);
    values_.resize(std::size_t{1} << n_);
    PriceVector q(p.begin(), p.end());
    for (std::size_t mask = 0; mask < values_.size(); ++mask) {
      for (std::size_t i = 0; i < n_; ++i) q[i] = p[i] + ((mask >> i) & 1u);
      values_[mask] = g(q);
    }
  }

  std::size_t n() const { return n_; }
  Value base() const { return values_[0]; }
  Value at(ItemSet x) const { return values_[x.mask()]; }
  Value step(ItemSet x) const { return at(x) - base(); }
  std::size_t size() const { return values_.size(); }

  bool has_descent() const {
    for (auto v : values_)
      if (v < base()) return true;
    return false;
  }

  // min { g(p + chi_Y) : Y strictly inside X } for every X (+inf for X empty).
  const std::vector<Value>& proper_subset_min() const {
    if (sub_min_.empty()) {
      sub_min_.assign(values_.size(), kPlusInfinity);
      for (std::size_t x = 1; x < values_.size(); ++x) {
        Value best = kPlusInfinity;
        for (std::size_t m = x; m; m &= m - 1) {
          const std::size_t y = x & ~(m & (~m + 1));
          best = std::min({best, values_[y], sub_min_[y]});
        }
        sub_min_[x] = best;
      }
    }
    return sub_min_;
  }

  bool gp_minimal(ItemSet x) const {
    return !x.empty() && at(x) != kPlusInfinity && at(x) < proper_subset_min()[x.mask()];
  }

 private:
  std::size_t n_;
  std::vector<Value> values_;
  mutable std::vector<Value> sub_min_;
};

// X is (g,p)-minimal: nonempty and g(p + chi_Y) > g(p + chi_X) for every
// proper subset Y (2^|X| - 1 evaluations).
inline bool is_gp_minimal(const FunctionOracle& g, std::span<const Value> p, ItemSet x) {
  if (x.empty()) return false;
  const Value gx = g(shifted(p, x));
  if (gx == kPlusInfinity) return false;
  bool ok = true;
  for_each_subset(x, [&](ItemSet y) {
    if (ok && y != x && g(shifted(p, y)) <= gx) ok = false;
  });
  return ok;
}

// Every (g,p)-minimal set, in mask order.
inline std::vector<ItemSet> gp_minimal_family(const StepTable& t) {
  std::vector<ItemSet> out;
  for (std::size_t m = 1; m < t.size(); ++m)
    if (t.gp_minimal(ItemSet(static_cast<ItemSet::Mask>(m)))) out.emplace_back(static_cast<ItemSet::Mask>(m));
  return out;
}

inline std::vector<ItemSet> gp_minimal_family(const FunctionOracle& g, std::span<const Value> p) {
  return gp_minimal_family(StepTable(g, p));
}

// First descent set by cardinality, then lexicographically; minimum
// cardinality makes it inclusion-minimal.
inline std::optional<ItemSet> minimal_descent_set(const StepTable& t) {
  for (auto x : subsets_by_cardinality(t.n()))
    if (!x.empty() && t.at(x) < t.base()) return x;
  return std::nullopt;
}

inline std::optional<ItemSet> minimal_descent_set(const FunctionOracle& g, std::span<const Value> p) {
  return minimal_descent_set(StepTable(g, p));
}

// Unique minimal minimizer of X -> g(p + chi_X) - g(p): the intersection of
// all minimizers, which attains the minimum when the step function is
// submodular.
inline ItemSet minimal_minimizer_step(const StepTable& t) {
  Value best = kPlusInfinity;
  for (std::size_t m = 0; m < t.size(); ++m) best = std::min(best, t.at(ItemSet(static_cast<ItemSet::Mask>(m))));
  ItemSet meet_all = ItemSet::full(t.n());
  for (std::size_t m = 0; m < t.size(); ++m) {
    const ItemSet x(static_cast<ItemSet::Mask>(m));
    if (t.at(x) == best) meet_all = meet_all & x;
  }
  if (t.at(meet_all) != best)
    throw NotLNaturalConvex("step function not submodular: intersection of minimizers " +
                            meet_all.to_string() + " is not a minimizer");
  return meet_all;
}

inline ItemSet minimal_minimizer_step(const FunctionOracle& g, std::span<const Value> p) {
  return minimal_minimizer_step(StepTable(g, p));
}

// Nonempty subsets 1..2^n-1 in a seeded Fisher-Yates order.
inline std::vector<ItemSet::Mask> shuffled_subsets(std::size_t n, std::uint64_t seed) {
  std::vector<ItemSet::Mask> order((std::size_t{1} << n) - 1);
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<ItemSet::Mask>(k + 1);
  std::mt19937_64 rng(seed);
  for (std::size_t k = order.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng() % k);
    std::swap(order[k - 1], order[j]);
  }
  return order;
}

inline std::optional<ItemSet> first_gp_minimal(const StepTable& t, std::uint64_t seed) {
  for (auto m : shuffled_subsets(t.n(), seed)) {
    const ItemSet x(m);
    if (t.gp_minimal(x)) return x;  // implies t.at(x) < t.base()
  }
  return std::nullopt;
}

inline std::optional<ItemSet> first_gp_minimal(const FunctionOracle& g, std::span<const Value> p,
                                               std::uint64_t seed) {
  return first_gp_minimal(StepTable(g, p), seed);
}

// The unique maximal (g,p)-minimal set, computed as the union of the family
// and checked against the minimal minimizer of the step function. Empty when
// there is no descent set.
inline ItemSet maximal_gp_minimal(const StepTable& t) {
  ItemSet united;
  for (auto x : gp_minimal_family(t)) united = united | x;
  const ItemSet mm = minimal_minimizer_step(t);
  if (united != mm)
    throw NotLNaturalConvex("union of (g,p)-minimal sets " + united.to_string() +
                            " differs from the minimal minimizer " + mm.to_string());
  return united;
}

inline ItemSet maximal_gp_minimal(const FunctionOracle& g, std::span<const Value> p) {
  return maximal_gp_minimal(StepTable(g, p));
}

// ---------------------------------------------------------------------------

struct Strategy {
  enum class Kind { kMinimalDescent, kSteepestMinimal, kFirstGpMinimal, kMaximalGpMinimal };
  Kind kind = Kind::kSteepestMinimal;
  std::uint64_t seed = 0;  // kFirstGpMinimal only

  static Strategy minimal_descent() { return {Kind::kMinimalDescent, 0}; }
  static Strategy steepest_minimal() { return {Kind::kSteepestMinimal, 0}; }
  static Strategy first_gp_minimal(std::uint64_t seed) { return {Kind::kFirstGpMinimal, seed}; }
  static Strategy maximal_gp_minimal() { return {Kind::kMaximalGpMinimal, 0}; }

  static std::vector<Strategy> all(std::uint64_t seed) {
    return {minimal_descent(), steepest_minimal(), first_gp_minimal(seed), maximal_gp_minimal()};
  }

  // Command-line name.
  std::string_view name() const {
    switch (kind) {
      case Kind::kMinimalDescent: return "minimal-overdemanded";
      case Kind::kSteepestMinimal: return "steepest";
      case Kind::kFirstGpMinimal: return "excess-random";
      case Kind::kMaximalGpMinimal: return "excess-maximal";
    }
    return "?";
  }

  static std::optional<Strategy> parse(std::string_view name, std::uint64_t seed = 0) {
    for (auto s : all(seed))
      if (s.name() == name) return s;
    return std::nullopt;
  }

  bool operator==(const Strategy&) const = default;
};

// Step-2 choice at the current point; nullopt at a minimizer.
inline std::optional<ItemSet> select_step(const StepTable& t, const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::kMinimalDescent: return minimal_descent_set(t);
    case Strategy::Kind::kFirstGpMinimal: return first_gp_minimal(t, s.seed);
    case Strategy::Kind::kSteepestMinimal:
    case Strategy::Kind::kMaximalGpMinimal: {
      if (!t.has_descent()) return std::nullopt;
      return s.kind == Strategy::Kind::kSteepestMinimal ? minimal_minimizer_step(t) : maximal_gp_minimal(t);
    }
  }
  return std::nullopt;
}

struct TrajectoryStep {
  PriceVector p_before;
  ItemSet chosen;
  Value g_before;
  Value g_after;
  Value decrease;  // g_before - g_after
};

struct Trajectory {
  PriceVector start;
  std::vector<TrajectoryStep> steps;
  PriceVector p_final;

  std::size_t iterations() const { return steps.size(); }
};

inline std::size_t default_iteration_cap(const FunctionOracle& g, std::span<const Value> p0, Value g0) {
  std::optional<std::uint64_t> cap;
  if (g.lower_bound) cap = static_cast<std::uint64_t>(g0 - *g.lower_bound) + 1;
  // Each step raises some coordinate by one and stays in the domain box.
  std::uint64_t room = 0;
  bool bounded = true;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    if (g.upper[i] >= kUnboundedCoordinate) {
      bounded = false;
      break;
    }
    room += static_cast<std::uint64_t>(g.upper[i] - p0[i]);
  }
  if (bounded) cap = cap ? std::min(*cap, room + 1) : room + 1;
  if (!cap) throw DomainError("minimize: no lower bound or finite box; pass an explicit iteration cap");
  return static_cast<std::size_t>(*cap);
}

// Unit-step descent from p0. Stops when g(p + chi_X) >= g(p) for every X.
// Returns the minimal minimizer when g is L-natural convex, p0 lies below it
// and the strategy yields (g,p)-minimal sets.
inline Trajectory minimize(const FunctionOracle& g, std::span<const Value> p0, const Strategy& strategy,
                           std::optional<std::size_t> iteration_cap = std::nullopt) {
  if (p0.size() != g.dim()) throw DomainError("minimize: start point has the wrong dimension");
  const Value g0 = g(p0);
  if (g0 == kPlusInfinity) throw DomainError("minimize: start point " + to_string(p0) + " outside dom g");
  const std::size_t cap = iteration_cap ? *iteration_cap : default_iteration_cap(g, p0, g0);

  Trajectory tr;
  tr.start.assign(p0.begin(), p0.end());
  PriceVector p = tr.start;
  while (true) {
    const StepTable table(g, p);
    const auto chosen = select_step(table, strategy);
    if (!chosen) {
      if (table.has_descent())
        throw ContractViolation("strategy " + std::string(strategy.name()) + " found no set at a non-minimizer");
      break;
    }
    if (chosen->empty() || table.at(*chosen) >= table.base())
      throw ContractViolation("strategy " + std::string(strategy.name()) + " returned non-descent set " +
                              chosen->to_string());
    if (tr.steps.size() >= cap)
      throw IterationCapExceeded("minimize: iteration cap " + std::to_string(cap) + " exceeded");
    tr.steps.push_back({p, *chosen, table.base(), table.at(*chosen), table.base() - table.at(*chosen)});
    p = shifted(p, *chosen);
  }
  tr.p_final = std::move(p);
  return tr;
}

}  // namespace walras
