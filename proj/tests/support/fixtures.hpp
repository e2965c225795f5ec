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

// Shared test instances, random generators and independent reference
// computations. Nothing here calls into the code paths it is used to check.

#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "walras/walras.hpp"

namespace walras::testing {

// Three items, six bidders a, b, c, d, e, g (indices 0..5).
inline Instance six_bidder_example() {
  return Instance::unit(3, {{1, 0, 0}, {1, 0, 0}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {1, 1, 0}});
}

inline constexpr std::size_t kA = 0, kB = 1, kC = 2, kD = 3, kE = 4, kG = 5;

// One item type with two units; two bidders with marginals [3, 2].
inline Instance two_bidder_multi() {
  return Instance(Model::kMulti, {2},
                  {Valuation::separable_concave({{3, 2}}), Valuation::separable_concave({{3, 2}})});
}

// v(0,0)=0, v(1,0)=v(0,1)=1, v(1,1)=3 on u=(1,1).
inline Valuation complements_table() { return Valuation::explicit_table({0, 1, 1, 3}, {1, 1}); }

// Items labelled 1-based, as in the tables being reproduced.
inline ItemSet S(std::initializer_list<std::size_t> labels) { return ItemSet::from_labels(labels); }

inline std::vector<ItemSet> all_subsets(std::size_t n) {
  std::vector<ItemSet> out;
  for (ItemSet::Mask m = 0; m < (ItemSet::Mask{1} << n); ++m) out.emplace_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Random instances

// Unit model: n in [1, max_n], m in [0, max_m], values in [0, max_value].
inline Instance random_unit(std::mt19937_64& rng, std::size_t max_n = 5, std::size_t max_m = 7,
                            Value max_value = 5) {
  std::uniform_int_distribution<std::size_t> dn(1, max_n), dm(0, max_m);
  std::uniform_int_distribution<Value> dv(0, max_value);
  const auto n = dn(rng), m = dm(rng);
  std::vector<std::vector<Value>> vals(m, std::vector<Value>(n));
  for (auto& row : vals)
    for (auto& v : row) v = dv(rng);
  return Instance::unit(n, vals);
}

// Nonincreasing marginal lists with total value at most max_total.
inline std::vector<std::vector<Value>> random_marginals(std::mt19937_64& rng, const Bundle& u, Value max_total) {
  std::uniform_int_distribution<Value> dv(0, max_total);
  std::vector<std::vector<Value>> marg;
  Value total = 0;
  for (auto ui : u) {
    std::vector<Value> m(static_cast<std::size_t>(ui));
    for (auto& x : m) x = dv(rng);
    std::sort(m.rbegin(), m.rend());
    for (auto x : m) total += x;
    marg.push_back(std::move(m));
  }
  // Shave the smallest positive tail entries until the total fits.
  while (total > max_total) {
    std::uniform_int_distribution<std::size_t> di(0, marg.size() - 1);
    auto& m = marg[di(rng)];
    for (auto it = m.rbegin(); it != m.rend(); ++it) {
      if (*it > 0) {
        --*it;
        --total;
        break;
      }
    }
  }
  return marg;
}

// Multi model, separable concave: n in [1, max_n], u(i) in [1, max_u],
// m in [0, max_m], every valuation bounded by max_total.
inline Instance random_multi(std::mt19937_64& rng, std::size_t max_n = 3, Value max_u = 3,
                             std::size_t max_m = 4, Value max_total = 6) {
  std::uniform_int_distribution<std::size_t> dn(1, max_n), dm(0, max_m);
  std::uniform_int_distribution<Value> du(1, max_u);
  const auto n = dn(rng), m = dm(rng);
  Bundle u(n);
  for (auto& x : u) x = du(rng);
  std::vector<Valuation> vals;
  for (std::size_t b = 0; b < m; ++b) vals.push_back(Valuation::separable_concave(random_marginals(rng, u, max_total)));
  return Instance(Model::kMulti, u, std::move(vals));
}

// Laminar concave valuation: a concave function of x(N) plus concave
// functions of each x(i). M-natural concave, not separable.
inline Valuation random_laminar(std::mt19937_64& rng, const Bundle& u, Value max_marginal = 4) {
  Value total_units = 0;
  for (auto x : u) total_units += x;
  std::uniform_int_distribution<Value> dv(0, max_marginal);
  auto concave_prefix = [&](Value len) {
    std::vector<Value> m(static_cast<std::size_t>(len));
    for (auto& x : m) x = dv(rng);
    std::sort(m.rbegin(), m.rend());
    std::vector<Value> pre{0};
    for (auto x : m) pre.push_back(pre.back() + x);
    return pre;
  };
  auto whole = concave_prefix(total_units);
  std::vector<std::vector<Value>> parts;
  for (auto x : u) parts.push_back(concave_prefix(x));
  return Valuation::tabulate(u, [&](const Bundle& x) {
    Value s = 0, v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += x[i];
      v += parts[i][x[i]];
    }
    return v + whole[s];
  });
}

inline Instance random_laminar_multi(std::mt19937_64& rng, std::size_t max_n = 3, Value max_u = 2,
                                     std::size_t max_m = 3) {
  std::uniform_int_distribution<std::size_t> dn(1, max_n), dm(1, max_m);
  std::uniform_int_distribution<Value> du(1, max_u);
  const auto n = dn(rng), m = dm(rng);
  Bundle u(n);
  for (auto& x : u) x = du(rng);
  std::vector<Valuation> vals;
  for (std::size_t b = 0; b < m; ++b) vals.push_back(random_laminar(rng, u));
  return Instance(Model::kMulti, u, std::move(vals));
}

// ---------------------------------------------------------------------------
// Reference computations straight from the definitions.

// L(p) by listing every bidder's payoff over every bundle.
inline Value reference_lyapunov(const Instance& inst, const PriceVector& p) {
  Value total = 0;
  for (std::size_t i = 0; i < inst.n(); ++i) total += p[i] * inst.supply()[i];
  for (const auto& v : inst.valuations()) {
    Value best = 0;
    const Bundle zero(inst.n(), 0);
    for_each_in_box(zero, inst.supply(), [&](const Bundle& x) {
      Value f = v.value_unchecked(x);
      for (std::size_t i = 0; i < x.size(); ++i) f -= p[i] * x[i];
      best = std::max(best, f);
    });
    total += best;
  }
  return total;
}

// Componentwise minimal minimizer of the reference Lyapunov function over
// [0, cap] for the given cap.
inline PriceVector reference_min_minimizer(const Instance& inst, Value cap) {
  const PriceVector lower(inst.n(), 0), upper(inst.n(), cap);
  Value best = kPlusInfinity;
  std::vector<PriceVector> mins;
  for_each_in_box(lower, upper, [&](const PriceVector& p) {
    const Value l = reference_lyapunov(inst, p);
    if (l < best) {
      best = l;
      mins.clear();
    }
    if (l == best) mins.push_back(p);
  });
  PriceVector low = mins.front();
  for (const auto& p : mins) low = meet(low, p);
  return low;
}

}  // namespace walras::testing
