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

#include <algorithm>
#include <map>
#include <random>

#include "gtest/gtest.h"
#include "support/fixtures.hpp"
#include "walras/walras.hpp"

namespace walras {
namespace {

using testing::S;
using testing::kA;
using testing::kB;
using testing::kC;
using testing::kD;
using testing::kE;
using testing::kG;

const PriceVector kZero3{0, 0, 0};

TEST(UnitDemandSet, SixBidderAtZeroPrice) {
  const auto inst = testing::six_bidder_example();
  EXPECT_EQ(unit_demand_set(kA, kZero3, inst), (UnitDemandSet{false, S({1})}));
  EXPECT_EQ(unit_demand_set(kB, kZero3, inst), (UnitDemandSet{false, S({1})}));
  EXPECT_EQ(unit_demand_set(kC, kZero3, inst), (UnitDemandSet{false, S({2, 3})}));
  EXPECT_EQ(unit_demand_set(kG, kZero3, inst), (UnitDemandSet{false, S({1, 2})}));
}

TEST(UnitDemandSet, AllPayoffsTie) {
  const auto inst = testing::six_bidder_example();
  EXPECT_EQ(unit_demand_set(kA, PriceVector{1, 0, 0}, inst), (UnitDemandSet{true, S({1, 2, 3})}));
}

TEST(UnitDemandSet, Errors) {
  const auto inst = testing::six_bidder_example();
  EXPECT_THROW(unit_demand_set(6, kZero3, inst), DomainError);
  EXPECT_THROW(unit_demand_set(0, PriceVector{0, 0}, inst), DomainError);
  EXPECT_THROW(unit_demand_set(0, PriceVector{0, -1, 0}, inst), DomainError);
  EXPECT_THROW(unit_demand_set(0, PriceVector{0}, testing::two_bidder_multi()), DomainError);
}

TEST(DemandSet, SingleItemExamples) {
  const auto inst = testing::two_bidder_multi();
  EXPECT_EQ(demand_set(0, PriceVector{0}, inst), (std::vector<Bundle>{{2}}));
  EXPECT_EQ(demand_set(0, PriceVector{2}, inst), (std::vector<Bundle>{{1}, {2}}));
  EXPECT_EQ(demand_set(0, PriceVector{3}, inst), (std::vector<Bundle>{{0}, {1}}));
}

TEST(DemandSet, ZeroValuationAtPositivePrices) {
  const Instance inst(Model::kMulti, {2, 1}, {Valuation::separable_concave({{0, 0}, {0}})});
  EXPECT_EQ(demand_set(0, PriceVector{1, 3}, inst), (std::vector<Bundle>{{0, 0}}));
}

TEST(DemandSet, BudgetExceeded) {
  const Instance inst(Model::kMulti, {9, 9}, {Valuation::separable_concave({std::vector<Value>(9, 1), std::vector<Value>(9, 1)})});
  EXPECT_THROW(demand_set(0, PriceVector{0, 0}, inst, Budget{50}), BudgetExceeded);
}

TEST(Mu, Examples) {
  const auto inst = testing::two_bidder_multi();
  EXPECT_EQ(mu(0, ItemSet{}, PriceVector{0}, inst), 0);
  EXPECT_EQ(mu(0, S({1}), PriceVector{0}, inst), 2);
  EXPECT_EQ(mu(0, S({1}), PriceVector{2}, inst), 1);
}

// The tables of O(Y,p) and U(Y,p) at p = 0, all eight Y.
TEST(BidderSets, SixBidderTables) {
  const auto inst = testing::six_bidder_example();
  const std::map<ItemSet, BidderSet> only = {
      {S({}), {}},
      {S({2}), {}},
      {S({3}), {}},
      {S({1}), {kA, kB}},
      {S({1, 3}), {kA, kB}},
      {S({1, 2}), {kA, kB, kG}},
      {S({2, 3}), {kC, kD, kE}},
      {S({1, 2, 3}), {kA, kB, kC, kD, kE, kG}},
  };
  const std::map<ItemSet, BidderSet> some = {
      {S({}), {}},
      {S({1}), {kA, kB, kG}},
      {S({2}), {kC, kD, kE, kG}},
      {S({2, 3}), {kC, kD, kE, kG}},
      {S({3}), {kC, kD, kE}},
      {S({1, 2}), {kA, kB, kC, kD, kE, kG}},
      {S({1, 3}), {kA, kB, kC, kD, kE, kG}},
      {S({1, 2, 3}), {kA, kB, kC, kD, kE, kG}},
  };
  ASSERT_EQ(only.size(), 8u);
  ASSERT_EQ(some.size(), 8u);
  for (const auto& [y, expected] : only) EXPECT_EQ(bidders_only_demanding(y, kZero3, inst), expected) << y.to_string();
  for (const auto& [y, expected] : some) EXPECT_EQ(bidders_demanding_some(y, kZero3, inst), expected) << y.to_string();
}

bool Includes(const BidderSet& big, const BidderSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

BidderSet Minus(const BidderSet& a, const BidderSet& b) {
  BidderSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

BidderSet Intersect(const BidderSet& a, const BidderSet& b) {
  BidderSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void CheckSetIdentities(const Instance& inst, const PriceVector& p) {
  for (auto x : testing::all_subsets(inst.n())) {
    const auto o_x = bidders_only_demanding(x, p, inst);
    EXPECT_TRUE(Includes(bidders_demanding_some(x, p, inst), o_x));
    for_each_subset(x, [&](ItemSet z) {
      if (z.empty()) return;
      // U(Z,p) & O(X,p) = O(X,p) \ O(X\Z,p)
      EXPECT_EQ(Intersect(bidders_demanding_some(z, p, inst), o_x),
                Minus(o_x, bidders_only_demanding(x - z, p, inst)));
    });
  }
}

TEST(BidderSets, IdentitiesOnSixBidder) {
  const auto inst = testing::six_bidder_example();
  for_each_in_box(PriceVector{0, 0, 0}, PriceVector{2, 2, 2}, [&](const PriceVector& p) { CheckSetIdentities(inst, p); });
}

TEST(BidderSets, IdentitiesOnRandomUnitInstances) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 40; ++k) {
    const auto inst = testing::random_unit(rng, 6, 7, 4);
    std::uniform_int_distribution<Value> dp(0, 4);
    for (int t = 0; t < 5; ++t) {
      PriceVector p(inst.n());
      for (auto& x : p) x = dp(rng);
      CheckSetIdentities(inst, p);
    }
  }
}

TEST(BidderSets, EmptyYieldsNobody) {
  const auto inst = testing::six_bidder_example();
  EXPECT_TRUE(bidders_only_demanding(ItemSet{}, PriceVector{1, 0, 2}, inst).empty());
  EXPECT_TRUE(bidders_demanding_some(ItemSet{}, PriceVector{1, 0, 2}, inst).empty());
}

TEST(Mu, MonotoneInItemSet) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 30; ++k) {
    const auto inst = testing::random_multi(rng);
    if (inst.m() == 0) continue;
    std::uniform_int_distribution<Value> dp(0, 4);
    PriceVector p(inst.n());
    for (auto& x : p) x = dp(rng);
    const MultiDemandProfile prof(inst, p);
    for (auto x : testing::all_subsets(inst.n()))
      for_each_subset(x, [&](ItemSet y) {
        for (std::size_t b = 0; b < inst.m(); ++b) EXPECT_LE(prof.mu(b, y), prof.mu(b, x));
      });
  }
}

// Local search and the perturbed objective agree with enumeration on
// M-natural concave valuations.
TEST(GreedyDemand, AgreesWithEnumeration) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<Value> du(1, 4), dp(0, 6);
  for (int k = 0; k < 60; ++k) {
    Bundle u{du(rng), du(rng), du(rng)};
    std::vector<Valuation> vals{testing::random_laminar(rng, u),
                                Valuation::separable_concave(testing::random_marginals(rng, u, 15)),
                                Valuation::unit_demand({dp(rng), dp(rng), dp(rng)}, u)};
    const Instance inst(Model::kMulti, u, vals);
    for (int t = 0; t < 4; ++t) {
      PriceVector p{dp(rng), dp(rng), dp(rng)};
      for (std::size_t b = 0; b < inst.m(); ++b) {
        const auto& v = inst.valuation(b);
        const auto demand = demand_set(b, p, inst);
        const auto g = greedy_demand_bundle(v, p);
        EXPECT_EQ(payoff(v, p, g), payoff(v, p, demand.front()));
        EXPECT_NE(std::find(demand.begin(), demand.end(), g), demand.end());
        for (auto x : testing::all_subsets(3)) EXPECT_EQ(mu_by_perturbation(v, x, p), min_units_in(demand, x));
      }
    }
  }
}

}  // namespace
}  // namespace walras
