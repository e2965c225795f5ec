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

// Machine-readable run reports. Items are 1-based in all output.

#pragma once

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "walras/auction.hpp"

namespace walras {

inline const char* to_string(AllocationStatus s) {
  switch (s) {
    case AllocationStatus::kFound: return "found";
    case AllocationStatus::kNone: return "none";
    case AllocationStatus::kBudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

inline nlohmann::json to_json(const Allocation& a) {
  nlohmann::json j;
  if (const auto* ua = std::get_if<UnitAllocation>(&a)) j["items"] = ua->item_of_bidder;
  else j["bundles"] = std::get<MultiAllocation>(a).bundles;
  return j;
}

inline nlohmann::json auction_report(const Instance& inst, const Strategy& strategy, const AuctionResult& r) {
  nlohmann::json j;
  j["model"] = to_string(inst.model());
  j["strategy"] = std::string(strategy.name());
  if (strategy.kind == Strategy::Kind::kFirstGpMinimal) j["seed"] = strategy.seed;
  j["start"] = r.trajectory.start;
  j["p_final"] = r.p_min;
  j["iterations"] = r.trajectory.iterations();
  auto steps = nlohmann::json::array();
  for (std::size_t k = 0; k < r.trajectory.steps.size(); ++k) {
    const auto& s = r.trajectory.steps[k];
    const auto& d = r.diagnostics[k];
    steps.push_back({{"iter", k + 1},
                     {"p", s.p_before},
                     {"set", s.chosen.labels()},
                     {"mask", s.chosen.mask()},
                     {"L_before", s.g_before},
                     {"L_after", s.g_after},
                     {"deficiency", d.deficiency},
                     {"demand", d.demand},
                     {"supply", d.supply}});
  }
  j["steps"] = std::move(steps);
  j["allocation_status"] = to_string(r.allocation_status);
  j["allocation"] = r.allocation ? to_json(*r.allocation) : nlohmann::json(nullptr);
  return j;
}

// One row per iteration: price before the step, chosen set, L before the
// step and the deficiency of the chosen set.
inline std::string trajectory_csv(const Instance& inst, const AuctionResult& r) {
  std::ostringstream os;
  os << "iter";
  for (std::size_t i = 1; i <= inst.n(); ++i) os << ",p" << i;
  os << ",mask,members,L,deficiency\n";
  for (std::size_t k = 0; k < r.trajectory.steps.size(); ++k) {
    const auto& s = r.trajectory.steps[k];
    os << k + 1;
    for (auto v : s.p_before) os << ',' << v;
    os << ',' << s.chosen.mask() << ',';
    const auto labels = s.chosen.labels();
    for (std::size_t t = 0; t < labels.size(); ++t) os << (t ? " " : "") << labels[t];
    os << ',' << s.g_before << ',' << r.diagnostics[k].deficiency << '\n';
  }
  return os.str();
}

}  // namespace walras
