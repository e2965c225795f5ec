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

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "walras/demand.hpp"

namespace walras {

// Lyapunov function of the auction: total indirect utility plus p.u.
//   unit:  sum_b max[0, max_i (v_b(i) - p(i))] + p(N)
//   multi: sum_b max_{x in [0,u]} (v_b(x) - p.x) + p.u
// Both are nonnegative, and equilibrium prices are exactly the minimizers.
inline Value lyapunov(std::span<const Value> p, const Instance& inst, Budget budget = {}) {
  require_prices(inst, p);
  Value total = dot(p, inst.supply());
  if (inst.model() == Model::kUnit) {
    for (const auto& v : inst.valuations()) {
      const auto& vals = std::get<UnitDemandFamily>(v.payload()).values;
      Value best = 0;
      for (std::size_t i = 0; i < p.size(); ++i) best = std::max(best, vals[i] - p[i]);
      total = checked_add(total, best);
    }
    return total;
  }
  const Bundle zero(inst.n(), 0);
  budget.require(box_volume(zero, inst.supply()), "lyapunov");
  for (const auto& v : inst.valuations()) {
    Value best = 0;  // zero bundle
    for_each_in_box(zero, inst.supply(), [&](const Bundle& x) { best = std::max(best, payoff(v, p, x)); });
    total = checked_add(total, best);
  }
  return total;
}

// delta(X;p) from the demand side: |O(X,p)| - |X| (unit) or
// sum_b mu_b(X;p) - u(X) (multi).
inline Value deficiency(ItemSet x, std::span<const Value> p, const Instance& inst, Budget budget = {}) {
  if (inst.model() == Model::kUnit) return UnitDemandProfile(inst, p).count_only(x) - static_cast<Value>(x.size());
  return MultiDemandProfile(inst, p, budget).total_mu(x) - inst.supply_of(x);
}

// L(p + chi_X) - L(p), from two Lyapunov evaluations.
inline Value lyapunov_step(ItemSet x, std::span<const Value> p, const Instance& inst, Budget budget = {}) {
  return checked_sub(lyapunov(shifted(p, x), inst, budget), lyapunov(p, inst, budget));
}

// Lyapunov function bound to one instance, with an optional exact-price memo.
// Safe for concurrent use.
class LyapunovOracle {
 public:
  explicit LyapunovOracle(Instance inst, Budget budget = {}, bool memoize = true)
      : inst_(std::move(inst)), budget_(budget), memoize_(memoize), memo_(std::make_unique<Memo>()) {}

  const Instance& instance() const { return inst_; }

  Value operator()(std::span<const Value> p) const {
    if (!memoize_) return lyapunov(p, inst_, budget_);
    PriceVector key(p.begin(), p.end());
    {
      std::shared_lock lock(memo_->mutex);
      if (auto it = memo_->values.find(key); it != memo_->values.end()) return it->second;
    }
    const Value v = lyapunov(p, inst_, budget_);
    std::unique_lock lock(memo_->mutex);
    memo_->values.emplace(std::move(key), v);
    return v;
  }

 private:
  struct VectorHash {
    std::size_t operator()(const PriceVector& p) const {
      std::size_t h = 1469598103934665603ull;
      for (auto x : p) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  struct Memo {
    std::shared_mutex mutex;
    std::unordered_map<PriceVector, Value, VectorHash> values;
  };

  Instance inst_;
  Budget budget_;
  bool memoize_;
  std::unique_ptr<Memo> memo_;
};

}  // namespace walras
