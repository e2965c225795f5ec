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

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "walras/core.hpp"

namespace walras {

// Hard cap on the number of item types. Every subset scan is 2^n.
inline constexpr std::size_t kMaxItems = 24;

// Subset of items {0..n-1} as a bitmask. Item i is bit i.
class ItemSet {
 public:
  using Mask = std::uint32_t;

  constexpr ItemSet() = default;
  constexpr explicit ItemSet(Mask mask) : mask_(mask) {}
  ItemSet(std::initializer_list<std::size_t> items) {
    for (auto i : items) mask_ |= Mask{1} << i;
  }

  static ItemSet full(std::size_t n) { return ItemSet(n == 32 ? ~Mask{0} : (Mask{1} << n) - 1); }
  static ItemSet single(std::size_t i) { return ItemSet(Mask{1} << i); }
  // Builds from 1-based item labels.
  static ItemSet from_labels(const std::vector<std::size_t>& labels) {
    ItemSet s;
    for (auto l : labels) s.mask_ |= Mask{1} << (l - 1);
    return s;
  }

  constexpr Mask mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(std::size_t i) const { return (mask_ >> i) & 1u; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

  constexpr bool subset_of(ItemSet o) const { return (mask_ & ~o.mask_) == 0; }
  constexpr bool proper_subset_of(ItemSet o) const { return subset_of(o) && mask_ != o.mask_; }
  constexpr bool intersects(ItemSet o) const { return (mask_ & o.mask_) != 0; }

  constexpr ItemSet operator|(ItemSet o) const { return ItemSet(mask_ | o.mask_); }
  constexpr ItemSet operator&(ItemSet o) const { return ItemSet(mask_ & o.mask_); }
  constexpr ItemSet operator-(ItemSet o) const { return ItemSet(mask_ & ~o.mask_); }
  constexpr bool operator==(const ItemSet&) const = default;
  constexpr auto operator<=>(const ItemSet&) const = default;

  // 0-based members in increasing order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (Mask m = mask_; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  // 1-based labels, the way items are reported.
  std::vector<std::size_t> labels() const {
    auto out = members();
    for (auto& i : out) ++i;
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto l : labels()) {
      if (!first) s += ",";
      s += std::to_string(l);
      first = false;
    }
    return s + "}";
  }

 private:
  Mask mask_ = 0;
};

inline void require_item_count(std::size_t n) {
  if (n > kMaxItems)
    throw DomainError("item count " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(kMaxItems));
}

// p + chi_X
inline PriceVector shifted(std::span<const Value> p, ItemSet x, Value sign = 1) {
  PriceVector q(p.begin(), p.end());
  for (std::size_t i = 0; i < q.size(); ++i)
    if (x.contains(i)) q[i] += sign;
  return q;
}

// Calls f(Y) for every subset Y of `within` (including empty and `within`).
template <typename F>
void for_each_subset(ItemSet within, F&& f) {
  const auto w = within.mask();
  ItemSet::Mask y = 0;
  while (true) {
    f(ItemSet(y));
    if (y == w) break;
    y = (y - w) & w;
  }
}

// All subsets of {0..n-1} by increasing cardinality, lexicographic on the
// sorted member list within each cardinality.
inline std::vector<ItemSet> subsets_by_cardinality(std::size_t n) {
  std::vector<ItemSet> out;
  out.reserve(std::size_t{1} << n);
  out.emplace_back();
  std::vector<std::size_t> comb;
  for (std::size_t k = 1; k <= n; ++k) {
    comb.resize(k);
    for (std::size_t j = 0; j < k; ++j) comb[j] = j;
    while (true) {
      ItemSet::Mask m = 0;
      for (auto c : comb) m |= ItemSet::Mask{1} << c;
      out.emplace_back(m);
      // Advance to the next k-combination in lexicographic order.
      std::size_t j = k;
      while (j > 0 && comb[j - 1] == n - k + (j - 1)) --j;
      if (j == 0) break;
      ++comb[j - 1];
      for (std::size_t t = j; t < k; ++t) comb[t] = comb[t - 1] + 1;
    }
  }
  return out;
}

}  // namespace walras
