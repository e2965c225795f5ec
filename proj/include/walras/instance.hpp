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

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "walras/core.hpp"
#include "walras/item_set.hpp"

namespace walras {

enum class Model { kUnit, kMulti };

inline const char* to_string(Model m) { return m == Model::kUnit ? "unit" : "multi"; }

// v(x) = max over items held of values[i]; v(0) = 0.
struct UnitDemandFamily {
  std::vector<Value> values;
  bool operator==(const UnitDemandFamily&) const = default;
};

// v(x) = sum_i (marginals[i][0] + ... + marginals[i][x(i)-1]).
struct SeparableConcaveFamily {
  std::vector<std::vector<Value>> marginals;
  bool operator==(const SeparableConcaveFamily&) const = default;
};

// Dense table over [0, u] in odometer order (coordinate 0 fastest).
struct ExplicitTableFamily {
  std::vector<Value> table;
  bool operator==(const ExplicitTableFamily&) const = default;
};

enum class Family { kUnitDemand, kSeparableConcave, kExplicitTable };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::kUnitDemand: return "unit_demand";
    case Family::kSeparableConcave: return "separable_concave";
    case Family::kExplicitTable: return "explicit_table";
  }
  return "?";
}

// Linear index of x in the box [0, u], coordinate 0 fastest.
inline std::size_t box_index(std::span<const Value> x, std::span<const Value> u) {
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    idx += static_cast<std::size_t>(x[i]) * stride;
    stride *= static_cast<std::size_t>(u[i] + 1);
  }
  return idx;
}

// An integer valuation on the box [0, u]. Immutable once built.
class Valuation {
 public:
  using Payload = std::variant<UnitDemandFamily, SeparableConcaveFamily, ExplicitTableFamily>;

  static Valuation unit_demand(std::vector<Value> values, Bundle box) {
    if (values.size() != box.size()) throw DomainError("unit_demand: values length must equal n");
    for (auto v : values)
      if (v < 0) throw DomainError("unit_demand: values must be nonnegative");
    return Valuation(UnitDemandFamily{std::move(values)}, std::move(box));
  }

  static Valuation separable_concave(std::vector<std::vector<Value>> marginals) {
    Bundle box;
    std::vector<std::vector<Value>> prefix;
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      const auto& m = marginals[i];
      std::vector<Value> ps{0};
      for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k] < 0) throw DomainError("separable_concave: marginals must be nonnegative");
        if (k > 0 && m[k] > m[k - 1])
          throw DomainError("separable_concave: marginals must be nonincreasing");
        ps.push_back(checked_add(ps.back(), m[k]));
      }
      box.push_back(static_cast<Value>(m.size()));
      prefix.push_back(std::move(ps));
    }
    Valuation v(SeparableConcaveFamily{std::move(marginals)}, std::move(box));
    v.prefix_ = std::move(prefix);
    return v;
  }

  static Valuation explicit_table(std::vector<Value> table, Bundle box) {
    Bundle zero(box.size(), 0);
    if (table.size() != box_volume(zero, box))
      throw DomainError("explicit_table: table must cover every bundle of the box exactly once");
    return Valuation(ExplicitTableFamily{std::move(table)}, std::move(box));
  }

  // Tabulates f over [0, box] into an explicit table.
  template <typename F>
  static Valuation tabulate(Bundle box, F&& f) {
    Bundle zero(box.size(), 0);
    std::vector<Value> table;
    for_each_in_box(zero, box, [&](const Bundle& x) { table.push_back(f(x)); });
    return explicit_table(std::move(table), std::move(box));
  }

  Family family() const { return static_cast<Family>(payload_.index()); }
  const Payload& payload() const { return payload_; }
  const Bundle& box() const { return box_; }
  std::size_t item_count() const { return box_.size(); }

  bool in_box(std::span<const Value> x) const {
    if (x.size() != box_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < 0 || x[i] > box_[i]) return false;
    return true;
  }

  // Exact value of bundle x; throws DomainError when x is outside [0, u].
  Value operator()(std::span<const Value> x) const {
    if (!in_box(x)) throw DomainError("bundle " + to_string(x) + " is outside the valuation box");
    return value_unchecked(x);
  }

  Value value_unchecked(std::span<const Value> x) const {
    switch (payload_.index()) {
      case 0: {
        const auto& vals = std::get<UnitDemandFamily>(payload_).values;
        Value best = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
          if (x[i] > 0) best = std::max(best, vals[i]);
        return best;
      }
      case 1: {
        Value s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s = checked_add(s, prefix_[i][x[i]]);
        return s;
      }
      default:
        return std::get<ExplicitTableFamily>(payload_).table[box_index(x, box_)];
    }
  }

  bool operator==(const Valuation& o) const { return payload_ == o.payload_ && box_ == o.box_; }

 private:
  Valuation(Payload p, Bundle box) : payload_(std::move(p)), box_(std::move(box)) {}

  Payload payload_;
  Bundle box_;
  std::vector<std::vector<Value>> prefix_;  // separable_concave only
};

inline Value evaluate(const Valuation& v, std::span<const Value> x) { return v(x); }

// ---------------------------------------------------------------------------

class Instance {
 public:
  // Throws DomainError when the type invariants fail.
  Instance(Model model, Bundle supply, std::vector<Valuation> valuations)
      : model_(model), supply_(std::move(supply)), valuations_(std::move(valuations)) {
    if (supply_.empty()) throw DomainError("n: at least one item type is required");
    require_item_count(supply_.size());
    for (std::size_t i = 0; i < supply_.size(); ++i)
      if (supply_[i] < 1) throw DomainError("u[" + std::to_string(i) + "]: supply must be positive");
    for (std::size_t b = 0; b < valuations_.size(); ++b) {
      const auto& v = valuations_[b];
      if (v.box() != supply_)
        throw DomainError("valuations[" + std::to_string(b) + "]: domain box must equal [0,u]");
      if (model_ == Model::kUnit) {
        if (v.family() != Family::kUnitDemand)
          throw DomainError("valuations[" + std::to_string(b) +
                            "]: unit model admits only unit_demand valuations");
      }
    }
    if (model_ == Model::kUnit)
      for (auto s : supply_)
        if (s != 1) throw DomainError("u: unit model requires unit supply");
  }

  // Unit-demand instance with u = 1 from per-bidder item values.
  static Instance unit(std::size_t n, const std::vector<std::vector<Value>>& values) {
    Bundle ones(n, 1);
    std::vector<Valuation> vals;
    for (const auto& v : values) vals.push_back(Valuation::unit_demand(v, ones));
    return Instance(Model::kUnit, ones, std::move(vals));
  }

  Model model() const { return model_; }
  std::size_t n() const { return supply_.size(); }
  std::size_t m() const { return valuations_.size(); }
  const Bundle& supply() const { return supply_; }
  const std::vector<Valuation>& valuations() const { return valuations_; }
  const Valuation& valuation(std::size_t b) const {
    if (b >= valuations_.size())
      throw DomainError("bidder index " + std::to_string(b) + " out of range");
    return valuations_[b];
  }

  Value supply_of(ItemSet x) const {
    Value s = 0;
    for (auto i : x.members()) s += supply_[i];
    return s;
  }

  // Same bidders viewed in the multi-demand model.
  Instance as_multi() const { return Instance(Model::kMulti, supply_, valuations_); }

  bool operator==(const Instance&) const = default;

 private:
  Model model_;
  Bundle supply_;
  std::vector<Valuation> valuations_;
};

// ---------------------------------------------------------------------------
// Exhaustive verifiers

// Exchange-axiom violation: no k in supp-(x-y) + {0} repairs item `item`.
struct ExchangeViolation {
  Bundle x;
  Bundle y;
  std::size_t item;  // 0-based, drawn from supp+(x-y)
};

struct MonotoneViolation {
  enum class Kind { kNotNormalized, kDecreasing };
  Kind kind;
  Bundle x;          // kDecreasing: v(x) > v(x + chi_item)
  std::size_t item;  // 0-based
};

namespace detail {

// Tabulates v over its box; the table plus coordinates of every point.
struct BoxTable {
  std::vector<Value> values;
  std::vector<Bundle> points;
  std::vector<std::size_t> strides;
};

inline BoxTable tabulate(const Valuation& v) {
  BoxTable t;
  const auto& u = v.box();
  std::size_t stride = 1;
  for (auto ui : u) {
    t.strides.push_back(stride);
    stride *= static_cast<std::size_t>(ui + 1);
  }
  Bundle zero(u.size(), 0);
  for_each_in_box(zero, u, [&](const Bundle& x) {
    t.values.push_back(v.value_unchecked(x));
    t.points.push_back(x);
  });
  return t;
}

}  // namespace detail

// Checks (M-natural-EXC) for every pair x, y in [0, u] and every
// i in supp+(x - y). Cost is volume^2 pairs, charged against the budget.
inline Verdict<ExchangeViolation> verify_mnat_exc(const Valuation& v, Budget budget = {}) {
  Bundle zero(v.item_count(), 0);
  const auto vol = box_volume(zero, v.box());
  budget.require(saturating_mul(vol, vol), "verify_mnat_exc");

  const auto t = detail::tabulate(v);
  const std::size_t n = v.item_count();
  const std::size_t count = t.values.size();
  for (std::size_t xi = 0; xi < count; ++xi) {
    const auto& x = t.points[xi];
    for (std::size_t yi = 0; yi < count; ++yi) {
      const auto& y = t.points[yi];
      const Value lhs = checked_add(t.values[xi], t.values[yi]);
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= y[i]) continue;
        const std::size_t xi_minus = xi - t.strides[i];
        const std::size_t yi_plus = yi + t.strides[i];
        // k = 0
        bool ok = lhs <= checked_add(t.values[xi_minus], t.values[yi_plus]);
        for (std::size_t k = 0; k < n && !ok; ++k) {
          if (x[k] >= y[k]) continue;
          ok = lhs <= checked_add(t.values[xi_minus + t.strides[k]], t.values[yi_plus - t.strides[k]]);
        }
        if (!ok) return {ExchangeViolation{x, y, i}};
      }
    }
  }
  return {};
}

inline Verdict<MonotoneViolation> verify_monotone_normalized(const Valuation& v,
                                                             Budget budget = {}) {
  Bundle zero(v.item_count(), 0);
  budget.require(box_volume(zero, v.box()), "verify_monotone_normalized");
  const auto t = detail::tabulate(v);
  if (t.values.front() != 0) return {MonotoneViolation{MonotoneViolation::Kind::kNotNormalized, zero, 0}};
  const auto& u = v.box();
  for (std::size_t xi = 0; xi < t.values.size(); ++xi) {
    const auto& x = t.points[xi];
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == u[i]) continue;
      if (t.values[xi] > t.values[xi + t.strides[i]])
        return {MonotoneViolation{MonotoneViolation::Kind::kDecreasing, x, i}};
    }
  }
  return {};
}

inline std::string describe(const ExchangeViolation& e) {
  return "M-natural exchange fails at x=" + to_string(e.x) + " y=" + to_string(e.y) +
         " i=" + std::to_string(e.item + 1);
}

inline std::string describe(const MonotoneViolation& e) {
  if (e.kind == MonotoneViolation::Kind::kNotNormalized) return "v(0) != 0";
  return "monotonicity fails at x=" + to_string(e.x) + " i=" + std::to_string(e.item + 1);
}

// Explicit tables reach the solvers only after the exchange axiom is
// verified; other families are M-natural concave by construction.
inline void require_mnat_concave(const Instance& inst, Budget budget = {}) {
  for (std::size_t b = 0; b < inst.m(); ++b) {
    const auto& v = inst.valuations()[b];
    if (v.family() != Family::kExplicitTable) continue;
    if (auto r = verify_mnat_exc(v, budget); !r.holds())
      throw DomainError("valuations[" + std::to_string(b) + "]: " + describe(*r.counterexample));
  }
}

}  // namespace walras
