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

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage.

#pragma once

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walras/walras.hpp"

namespace walras::cli {

inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("cannot read file: " + path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write file: " + out_path);
  f << text;
}

inline PriceVector load_start(const std::string& spec, const Instance& inst) {
  if (spec.empty() || spec == "zero") return PriceVector(inst.n(), 0);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(spec));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("start", std::string("malformed JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("p")) j = j["p"];
  auto p = walras::detail::as_int_array(j, "start");
  require_prices(inst, p);
  return p;
}

struct Options {
  std::string instance;
  std::string strategy;
  std::string start = "zero";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string check = "all";
};

inline int run_solve(const Options& o, Budget budget, std::ostream& out) {
  const auto inst = parse_instance(read_file(o.instance), budget);
  const auto strategy = *Strategy::parse(o.strategy, o.seed);
  const auto start = load_start(o.start, inst);
  const auto r = ascending_auction(inst, strategy, start, budget);
  const std::string text =
      o.format == "csv" ? trajectory_csv(inst, r) : auction_report(inst, strategy, r).dump(2) + "\n";
  emit(text, o.out, out);
  return kOk;
}

inline int run_verify(const Options& o, Budget budget, std::ostream& out, std::ostream& err) {
  const auto inst = parse_instance(read_file(o.instance), budget);
  const bool all = o.check == "all";
  bool ok = true;
  for (std::size_t b = 0; b < inst.m(); ++b) {
    const auto& v = inst.valuations()[b];
    if (all || o.check == "monotone") {
      const auto r = verify_monotone_normalized(v, budget);
      out << "bidder " << b << " monotone: " << (r.holds() ? "holds" : "fails") << "\n";
      if (!r.holds()) {
        err << "bidder " << b << ": " << describe(*r.counterexample) << "\n";
        ok = false;
      }
    }
    if (all || o.check == "mnat") {
      const auto r = verify_mnat_exc(v, budget);
      out << "bidder " << b << " mnat: " << (r.holds() ? "holds" : "fails") << "\n";
      if (!r.holds()) {
        err << "bidder " << b << ": " << describe(*r.counterexample) << "\n";
        ok = false;
      }
    }
  }
  if (all || o.check == "lnat") {
    const Box box{PriceVector(inst.n(), 0), price_cap(inst)};
    const auto r = is_lnat_convex_on_box(lyapunov_oracle(inst, budget), box, budget);
    out << "lyapunov lnat on [" << to_string(box.lower) << ", " << to_string(box.upper) << "]: " << (r.holds() ? "holds" : "fails") << "\n";
    if (!r.holds()) {
      const auto& c = *r.counterexample;
      err << "lyapunov: discrete midpoint inequality fails at p=" << to_string(c.p) << " q=" << to_string(c.q)
          << " lambda=" << c.lambda << "\n";
      ok = false;
    }
  }
  return ok ? kOk : kDomainError;
}

inline int run_compare(const Options& o, Budget budget, std::ostream& out) {
  const auto inst = parse_instance(read_file(o.instance), budget);
  require_mnat_concave(inst, budget);
  const auto strategies = Strategy::all(o.seed);
  std::vector<std::future<AuctionResult>> runs;
  for (const auto& s : strategies)
    runs.push_back(std::async(std::launch::async, [&inst, s, budget] {
      return ascending_auction(inst, s, std::nullopt, budget);
    }));
  nlohmann::json j;
  j["model"] = to_string(inst.model());
  j["seed"] = o.seed;
  auto results = nlohmann::json::array();
  std::optional<PriceVector> first;
  bool agree = true;
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    const auto r = runs[k].get();
    if (!first) first = r.p_min;
    agree = agree && r.p_min == *first;
    results.push_back({{"strategy", std::string(strategies[k].name())},
                       {"p_final", r.p_min},
                       {"iterations", r.trajectory.iterations()}});
  }
  j["results"] = std::move(results);
  j["agree"] = agree;
  emit(j.dump(2) + "\n", o.out, out);
  return agree ? kOk : kDomainError;
}

inline int run_oracle(const Options& o, Budget budget, std::ostream& out) {
  const auto inst = parse_instance(read_file(o.instance), budget);
  require_mnat_concave(inst, budget);
  nlohmann::json j;
  j["cap"] = price_cap(inst);
  j["minimizers"] = all_lyapunov_minimizers(inst, budget);
  j["p_min"] = brute_force_min_equilibrium(inst, budget);
  emit(j.dump(2) + "\n", o.out, out);
  return kOk;
}

}  // namespace detail

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal Walrasian equilibrium prices by ascending auction"};
  app.require_subcommand(1);
  detail::Options o;

  const std::vector<std::string> strategy_names = {"minimal-overdemanded", "steepest", "excess-random",
                                                   "excess-maximal"};
  auto* solve = app.add_subcommand("solve", "Run the ascending auction and write its trajectory");
  solve->add_option("--instance", o.instance, "Instance JSON file")->required();
  solve->add_option("--strategy", o.strategy, "Set-selection rule")
      ->required()
      ->check(CLI::IsMember(strategy_names));
  solve->add_option("--start", o.start, "Start price JSON file, or 'zero'");
  solve->add_option("--seed", o.seed, "Seed for excess-random");
  solve->add_option("--out", o.out, "Output file (default: stdout)");
  solve->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "Check valuation and Lyapunov properties exhaustively");
  verify->add_option("--instance", o.instance, "Instance JSON file")->required();
  verify->add_option("--check", o.check, "Which property")
      ->check(CLI::IsMember({"mnat", "lnat", "monotone", "all"}));

  auto* compare = app.add_subcommand("compare", "Run every strategy and compare the results");
  compare->add_option("--instance", o.instance, "Instance JSON file")->required();
  compare->add_option("--seed", o.seed, "Seed for excess-random");
  compare->add_option("--out", o.out, "Output file (default: stdout)");

  auto* oracle = app.add_subcommand("oracle", "Brute-force minimal equilibrium price");
  oracle->add_option("--instance", o.instance, "Instance JSON file")->required();
  oracle->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsageError;
  }

  const Budget budget = Budget::from_env();
  try {
    if (solve->parsed()) return detail::run_solve(o, budget, out);
    if (verify->parsed()) return detail::run_verify(o, budget, out, err);
    if (compare->parsed()) return detail::run_compare(o, budget, out);
    return detail::run_oracle(o, budget, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const walras::Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace walras::cli
