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

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace walras {

// Integer vectors indexed by item (0-based internally, item i is printed as
// i+1). Prices are nonnegative; bundles live in the box [0, u].
using Value = std::int64_t;
using PriceVector = std::vector<Value>;
using Bundle = std::vector<Value>;

// Stands in for +infinity in function oracles.
inline constexpr Value kPlusInfinity = std::numeric_limits<Value>::max();

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input. The message starts with the offending
// field path, e.g. "valuations[1].marginals[0]: ...".
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Input is well formed but outside the mathematical assumptions
// (non M-natural valuation, bundle out of box, bad bidder index...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

// A structural identity that holds for L-natural convex functions failed;
// the function handed in is not L-natural convex.
class NotLNaturalConvex : public Error {
 public:
  using Error::Error;
};

class IterationCapExceeded : public Error {
 public:
  using Error::Error;
};

// Internal contract violated (e.g. a step strategy picked a non-descent set).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Enumeration budget

struct Budget {
  static constexpr std::uint64_t kDefaultLimit = 1'000'000;
  std::uint64_t limit = kDefaultLimit;

  void require(std::uint64_t needed, const char* what) const {
    if (needed > limit) {
      std::ostringstream os;
      os << what << ": enumeration budget exceeded (" << needed << " > "
         << limit << ")";
      throw BudgetExceeded(os.str());
    }
  }

  // Honors WALRAS_BUDGET when it holds a positive integer.
  static Budget from_env() {
    Budget b;
    if (const char* s = std::getenv("WALRAS_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(s, &end, 10);
      if (end != s && *end == '\0' && v > 0) b.limit = v;
    }
    return b;
  }
};

// ---------------------------------------------------------------------------
// Checked arithmetic

inline Value checked_add(Value a, Value b) {
  Value r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Value checked_sub(Value a, Value b) {
  Value r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Value checked_mul(Value a, Value b) {
  Value r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Value dot(std::span<const Value> a, std::span<const Value> b) {
  Value s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

// ---------------------------------------------------------------------------
// Integer boxes [lower, upper]

// Saturates at UINT64_MAX.
inline std::uint64_t box_volume(std::span<const Value> lower, std::span<const Value> upper) {
  std::uint64_t vol = 1;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (upper[i] < lower[i]) return 0;
    auto w = static_cast<std::uint64_t>(upper[i] - lower[i]) + 1;
    if (w != 0 && vol > std::numeric_limits<std::uint64_t>::max() / w)
      return std::numeric_limits<std::uint64_t>::max();
    vol *= w;
  }
  return vol;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

// Odometer step; coordinate 0 varies fastest. Returns false after the last
// point (and leaves x reset to lower).
inline bool next_in_box(std::vector<Value>& x, std::span<const Value> lower,
                        std::span<const Value> upper) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < upper[i]) {
      ++x[i];
      return true;
    }
    x[i] = lower[i];
  }
  return false;
}

// Calls f(point) for every integer point of the box in odometer order.
// f may return bool; returning false stops the scan.
template <typename F>
void for_each_in_box(std::span<const Value> lower, std::span<const Value> upper, F&& f) {
  if (box_volume(lower, upper) == 0) return;
  std::vector<Value> x(lower.begin(), lower.end());
  do {
    if constexpr (std::is_same_v<decltype(f(std::as_const(x))), bool>) {
      if (!f(std::as_const(x))) return;
    } else {
      f(std::as_const(x));
    }
  } while (next_in_box(x, lower, upper));
}

inline std::vector<Value> meet(std::span<const Value> a, std::span<const Value> b) {
  std::vector<Value> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

inline std::vector<Value> join(std::span<const Value> a, std::span<const Value> b) {
  std::vector<Value> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool leq(std::span<const Value> a, std::span<const Value> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline std::string to_string(std::span<const Value> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

// Result of an exhaustive property check: holds, or the first violation in
// scan order.
template <typename Witness>
struct Verdict {
  std::optional<Witness> counterexample;
  bool holds() const { return !counterexample.has_value(); }
};

}  // namespace walras
