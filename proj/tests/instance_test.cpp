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

#include <random>
#include <string>

#include "gtest/gtest.h"
#include "support/fixtures.hpp"
#include "walras/walras.hpp"

namespace walras {
namespace {

using testing::complements_table;

std::string ParseErrorOf(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseInstance, MinimalUnitInstanceDefaultsSupplyToOnes) {
  const auto inst = parse_instance(
      R"({"model":"unit","n":1,"m":1,"valuations":[{"family":"unit_demand","values":[1]}]})");
  EXPECT_EQ(inst.model(), Model::kUnit);
  EXPECT_EQ(inst.supply(), Bundle({1}));
  EXPECT_EQ(inst.m(), 1u);
  EXPECT_EQ(evaluate(inst.valuation(0), Bundle{1}), 1);
}

TEST(ParseInstance, ZeroSupplyIsRejected) {
  const auto msg = ParseErrorOf(
      R"({"model":"multi","n":1,"m":1,"u":[0],"valuations":[{"family":"separable_concave","marginals":[[]]}]})");
  EXPECT_NE(msg.find("u[0]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("supply must be positive"), std::string::npos) << msg;
}

TEST(ParseInstance, SixBidderFromDataFile) {
  const auto inst = load_instance(WALRAS_DATA_DIR "/ex21.json");
  EXPECT_EQ(inst.n(), 3u);
  EXPECT_EQ(inst.m(), 6u);
  EXPECT_EQ(inst, testing::six_bidder_example());
}

TEST(ParseInstance, ErrorsNameTheOffendingField) {
  EXPECT_NE(ParseErrorOf("{not json").find("malformed JSON"), std::string::npos);
  EXPECT_NE(ParseErrorOf(R"({"model":"unit","n":2,"m":1,"valuations":[]})").find("valuations"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(R"({"model":"unit","n":1,"m":1,"valuations":[{"family":"magic"}]})")
                .find("valuations[0].family"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(R"({"model":"multi","n":2,"m":0,"u":[1],"valuations":[]})").find("u:"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(R"({"model":"multi","n":1,"m":1,"u":[2],
                            "valuations":[{"family":"separable_concave","marginals":[[1,3]]}]})")
                .find("valuations[0].marginals[0]: marginals must be nonincreasing"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(R"({"model":"unit","n":1,"m":1,
                            "valuations":[{"family":"separable_concave","marginals":[[1]]}]})")
                .find("unit model admits only unit_demand"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(R"({"model":"unit","n":1,"m":1,"valuations":[{"family":"unit_demand","values":[-1]}]})")
                .find("valuations[0].values[0]"),
            std::string::npos);
}

TEST(ParseInstance, ExplicitTableMustBeTotalNormalizedAndMonotone) {
  const std::string head = R"({"model":"multi","n":2,"m":1,"u":[1,1],"valuations":[{"family":"explicit_table","entries":)";
  EXPECT_NE(ParseErrorOf(head + R"([{"x":[0,0],"v":0},{"x":[1,0],"v":1}]}]})").find("every bundle"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(head + R"([{"x":[0,0],"v":1},{"x":[1,0],"v":1},{"x":[0,1],"v":1},{"x":[1,1],"v":1}]}]})")
                .find("v(0) != 0"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(head + R"([{"x":[0,0],"v":0},{"x":[1,0],"v":2},{"x":[0,1],"v":0},{"x":[1,1],"v":1}]}]})")
                .find("monotonicity fails at x=(1,0) i=2"),
            std::string::npos);
  EXPECT_NE(ParseErrorOf(head + R"([{"x":[0,0],"v":0},{"x":[0,0],"v":0},{"x":[0,1],"v":0},{"x":[1,1],"v":1}]}]})")
                .find("duplicate"),
            std::string::npos);
}

TEST(ParseInstance, RoundTripOnRandomInstances) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 40; ++k) {
    const auto a = testing::random_unit(rng);
    EXPECT_EQ(parse_instance(serialize_instance(a)), a);
    const auto b = testing::random_multi(rng);
    EXPECT_EQ(parse_instance(serialize_instance(b)), b);
    const auto c = testing::random_laminar_multi(rng);
    EXPECT_EQ(parse_instance(serialize_instance(c)), c);
  }
}

TEST(Evaluate, ZeroBundleIsZero) {
  EXPECT_EQ(evaluate(Valuation::unit_demand({4, 2}, {1, 1}), Bundle{0, 0}), 0);
  EXPECT_EQ(evaluate(Valuation::separable_concave({{3, 2}, {1}}), Bundle{0, 0}), 0);
  EXPECT_EQ(evaluate(complements_table(), Bundle{0, 0}), 0);
}

TEST(Evaluate, SeparableConcaveSumsMarginalPrefixes) {
  const auto v = Valuation::separable_concave({{3, 2}});
  EXPECT_EQ(evaluate(v, Bundle{1}), 3);
  EXPECT_EQ(evaluate(v, Bundle{2}), 3 + 2);
}

TEST(Evaluate, SixBidderBidderG) {
  const auto inst = testing::six_bidder_example();
  EXPECT_EQ(evaluate(inst.valuation(testing::kG), Bundle{0, 1, 0}), 1);
  EXPECT_EQ(evaluate(inst.valuation(testing::kG), Bundle{0, 0, 1}), 0);
}

TEST(Evaluate, OutOfBoxThrows) {
  const auto v = Valuation::separable_concave({{3, 2}});
  EXPECT_THROW(evaluate(v, Bundle{3}), DomainError);
  EXPECT_THROW(evaluate(v, Bundle{-1}), DomainError);
  EXPECT_THROW(evaluate(v, Bundle{1, 0}), DomainError);
}

TEST(VerifyMnatExc, SeparableConcaveHolds) {
  EXPECT_TRUE(verify_mnat_exc(Valuation::separable_concave({{3, 2}})).holds());
}

TEST(VerifyMnatExc, ComplementsFailWithFirstWitness) {
  const auto r = verify_mnat_exc(complements_table());
  ASSERT_FALSE(r.holds());
  EXPECT_EQ(r.counterexample->x, Bundle({1, 1}));
  EXPECT_EQ(r.counterexample->y, Bundle({0, 0}));
  EXPECT_EQ(r.counterexample->item, 0u);  // item 1
}

TEST(VerifyMnatExc, UnitDemandHolds) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Value> dv(0, 6);
  for (int k = 0; k < 30; ++k) {
    std::vector<Value> vals(3);
    for (auto& x : vals) x = dv(rng);
    EXPECT_TRUE(verify_mnat_exc(Valuation::unit_demand(vals, {1, 1, 1})).holds());
    // With multiplicities the family stays M-natural concave.
    EXPECT_TRUE(verify_mnat_exc(Valuation::unit_demand(vals, {2, 1, 2})).holds());
  }
}

TEST(VerifyMnatExc, RandomSeparableAndLaminarHold) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<Value> du(1, 4);
  for (int k = 0; k < 25; ++k) {
    Bundle u{du(rng), du(rng), du(rng)};  // volume up to 125
    EXPECT_TRUE(verify_mnat_exc(Valuation::separable_concave(testing::random_marginals(rng, u, 12))).holds());
    EXPECT_TRUE(verify_mnat_exc(testing::random_laminar(rng, u)).holds());
  }
}

TEST(VerifyMnatExc, BudgetIsEnforced) {
  EXPECT_THROW(verify_mnat_exc(Valuation::separable_concave({{3, 2, 1}}), Budget{8}), BudgetExceeded);
  EXPECT_NO_THROW(verify_mnat_exc(Valuation::separable_concave({{3, 2, 1}}), Budget{16}));
}

TEST(VerifyMonotoneNormalized, Cases) {
  EXPECT_TRUE(verify_monotone_normalized(Valuation::explicit_table({0, 0, 0, 0}, {1, 1})).holds());

  const auto shifted = verify_monotone_normalized(Valuation::explicit_table({1, 1, 1, 1}, {1, 1}));
  ASSERT_FALSE(shifted.holds());
  EXPECT_EQ(shifted.counterexample->kind, MonotoneViolation::Kind::kNotNormalized);

  const auto dec = verify_monotone_normalized(Valuation::explicit_table({0, 2, 0, 1}, {1, 1}));
  ASSERT_FALSE(dec.holds());
  EXPECT_EQ(dec.counterexample->kind, MonotoneViolation::Kind::kDecreasing);
  EXPECT_EQ(dec.counterexample->x, Bundle({1, 0}));
  EXPECT_EQ(dec.counterexample->item, 1u);  // item 2
}

TEST(VerifyMonotoneNormalized, AcceptedValuationsEvaluateMonotonically) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const auto inst = testing::random_laminar_multi(rng);
    for (const auto& v : inst.valuations()) {
      ASSERT_TRUE(verify_monotone_normalized(v).holds());
      const Bundle zero(inst.n(), 0);
      for_each_in_box(zero, inst.supply(), [&](const Bundle& x) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] == inst.supply()[i]) continue;
          EXPECT_LE(evaluate(v, x), evaluate(v, shifted(x, ItemSet::single(i))));
        }
      });
    }
  }
}

TEST(Instance, InvariantsAreChecked) {
  EXPECT_THROW(Instance(Model::kMulti, {1, 0}, {}), DomainError);
  EXPECT_THROW(Instance(Model::kUnit, {1}, {Valuation::separable_concave({{1}})}), DomainError);
  EXPECT_THROW(Instance(Model::kMulti, {2}, {Valuation::separable_concave({{1}})}), DomainError);
  EXPECT_THROW(Instance(Model::kMulti, Bundle(kMaxItems + 1, 1), {}), DomainError);
}

}  // namespace
}  // namespace walras
