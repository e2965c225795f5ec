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

// JSON instance format:
//
//   { "model": "unit"|"multi", "n": int, "m": int, "u": [int,...],
//     "valuations": [ {"family":"unit_demand","values":[...]} |
//                     {"family":"separable_concave","marginals":[[...],...]} |
//                     {"family":"explicit_table","entries":[{"x":[...],"v":int},...]} ] }
//
// "u" may be omitted for the unit model.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "walras/instance.hpp"

namespace walras {

namespace detail {

using nlohmann::json;

inline const json& require_key(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError(path.empty() ? "<root>" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

inline Value as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(kPlusInfinity))
    throw ParseError(path, "integer out of range");
  return j.get<Value>();
}

inline std::vector<Value> as_int_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  std::vector<Value> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_int(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline Valuation parse_valuation(const json& j, const std::string& path, const Bundle& u,
                                 Budget budget) {
  const auto& fam = require_key(j, path, "family");
  if (!fam.is_string()) throw ParseError(path + ".family", "expected a string");
  const auto tag = fam.get<std::string>();
  const std::size_t n = u.size();

  if (tag == "unit_demand") {
    const auto vp = path + ".values";
    auto values = as_int_array(require_key(j, path, "values"), vp);
    if (values.size() != n) throw ParseError(vp, "expected " + std::to_string(n) + " values");
    for (std::size_t i = 0; i < n; ++i)
      if (values[i] < 0) throw ParseError(vp + "[" + std::to_string(i) + "]", "value must be nonnegative");
    return Valuation::unit_demand(std::move(values), u);
  }

  if (tag == "separable_concave") {
    const auto mp = path + ".marginals";
    const auto& arr = require_key(j, path, "marginals");
    if (!arr.is_array() || arr.size() != n)
      throw ParseError(mp, "expected an array of " + std::to_string(n) + " marginal lists");
    std::vector<std::vector<Value>> marginals;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ip = mp + "[" + std::to_string(i) + "]";
      auto m = as_int_array(arr[i], ip);
      if (static_cast<Value>(m.size()) != u[i])
        throw ParseError(ip, "expected u(" + std::to_string(i + 1) + ")=" + std::to_string(u[i]) + " marginals");
      for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k] < 0) throw ParseError(ip + "[" + std::to_string(k) + "]", "marginal must be nonnegative");
        if (k > 0 && m[k] > m[k - 1]) throw ParseError(ip, "marginals must be nonincreasing");
      }
      marginals.push_back(std::move(m));
    }
    try {
      return Valuation::separable_concave(std::move(marginals));
    } catch (const OverflowError&) {
      throw ParseError(mp, "total value overflows a 64-bit integer");
    }
  }

  if (tag == "explicit_table") {
    const auto ep = path + ".entries";
    const auto& arr = require_key(j, path, "entries");
    if (!arr.is_array()) throw ParseError(ep, "expected an array");
    Bundle zero(n, 0);
    const auto vol = box_volume(zero, u);
    budget.require(vol, "explicit_table");
    std::vector<Value> table(vol, 0);
    std::vector<bool> seen(vol, false);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto kp = ep + "[" + std::to_string(k) + "]";
      auto x = as_int_array(require_key(arr[k], kp, "x"), kp + ".x");
      if (x.size() != n) throw ParseError(kp + ".x", "expected " + std::to_string(n) + " components");
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] < 0 || x[i] > u[i]) throw ParseError(kp + ".x", "bundle outside [0,u]");
      const auto idx = box_index(x, u);
      if (seen[idx]) throw ParseError(kp + ".x", "duplicate bundle " + to_string(x));
      seen[idx] = true;
      table[idx] = as_int(require_key(arr[k], kp, "v"), kp + ".v");
    }
    if (arr.size() != vol) throw ParseError(ep, "table must list every bundle of [0,u] exactly once");
    auto v = Valuation::explicit_table(std::move(table), u);
    if (auto r = verify_monotone_normalized(v, budget); !r.holds())
      throw ParseError(path, "valuation must be monotone and normalized: " + describe(*r.counterexample));
    return v;
  }

  throw ParseError(path + ".family", "unknown family tag \"" + tag + "\"");
}

}  // namespace detail

inline Instance parse_instance(std::string_view text, Budget budget = {}) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<root>", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("<root>", "expected an object");

  const auto& model_j = detail::require_key(j, "", "model");
  if (!model_j.is_string()) throw ParseError("model", "expected a string");
  const auto model_s = model_j.get<std::string>();
  Model model;
  if (model_s == "unit") model = Model::kUnit;
  else if (model_s == "multi") model = Model::kMulti;
  else throw ParseError("model", "unknown model \"" + model_s + "\"");

  const Value n = detail::as_int(detail::require_key(j, "", "n"), "n");
  if (n < 1) throw ParseError("n", "item count must be positive");
  if (static_cast<std::size_t>(n) > kMaxItems)
    throw ParseError("n", "item count exceeds the cap of " + std::to_string(kMaxItems));
  const Value m = detail::as_int(detail::require_key(j, "", "m"), "m");
  if (m < 0) throw ParseError("m", "bidder count must be nonnegative");

  Bundle u;
  if (auto it = j.find("u"); it != j.end()) {
    u = detail::as_int_array(*it, "u");
  } else if (model == Model::kUnit) {
    u.assign(static_cast<std::size_t>(n), 1);
  } else {
    throw ParseError("u", "missing field");
  }
  if (static_cast<Value>(u.size()) != n) throw ParseError("u", "length must equal n");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] < 1) throw ParseError("u[" + std::to_string(i) + "]", "supply must be positive");
  if (model == Model::kUnit)
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != 1) throw ParseError("u[" + std::to_string(i) + "]", "unit model requires unit supply");

  const auto& vals = detail::require_key(j, "", "valuations");
  if (!vals.is_array()) throw ParseError("valuations", "expected an array");
  if (static_cast<Value>(vals.size()) != m) throw ParseError("valuations", "length must equal m");

  std::vector<Valuation> valuations;
  for (std::size_t b = 0; b < vals.size(); ++b) {
    const auto path = "valuations[" + std::to_string(b) + "]";
    auto v = detail::parse_valuation(vals[b], path, u, budget);
    if (model == Model::kUnit && v.family() != Family::kUnitDemand)
      throw ParseError(path + ".family", "unit model admits only unit_demand valuations");
    valuations.push_back(std::move(v));
  }
  return Instance(model, std::move(u), std::move(valuations));
}

inline nlohmann::json to_json(const Instance& inst) {
  using detail::json;
  json j;
  j["model"] = to_string(inst.model());
  j["n"] = inst.n();
  j["m"] = inst.m();
  j["u"] = inst.supply();
  json vals = json::array();
  for (const auto& v : inst.valuations()) {
    json jv;
    jv["family"] = to_string(v.family());
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, UnitDemandFamily>) {
            jv["values"] = p.values;
          } else if constexpr (std::is_same_v<T, SeparableConcaveFamily>) {
            jv["marginals"] = p.marginals;
          } else {
            json entries = json::array();
            Bundle zero(v.item_count(), 0);
            std::size_t k = 0;
            for_each_in_box(zero, v.box(), [&](const Bundle& x) {
              entries.push_back({{"x", x}, {"v", p.table[k++]}});
            });
            jv["entries"] = std::move(entries);
          }
        },
        v.payload());
    vals.push_back(std::move(jv));
  }
  j["valuations"] = std::move(vals);
  return j;
}

inline std::string serialize_instance(const Instance& inst) { return to_json(inst).dump(); }

inline Instance load_instance(const std::string& path, Budget budget = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open instance file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), budget);
}

}  // namespace walras
