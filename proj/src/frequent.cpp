// Copyright 2026 The arm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "armforge/frequent.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace armforge {

namespace {

bool by_items(const CountedItemset& a, const CountedItemset& b) { return a.items < b.items; }

}  // namespace

std::size_t FrequentItemsets::size() const {
  std::size_t n = 0;
  for (const auto& level : by_level) n += level.size();
  return n;
}

std::optional<std::size_t> FrequentItemsets::count_of(const Itemset& items) const {
  if (items.empty()) return n_rows;
  if (items.size() > by_level.size()) return std::nullopt;
  const auto& level = by_level[items.size() - 1];
  auto it = std::lower_bound(level.begin(), level.end(), items,
                             [](const CountedItemset& c, const Itemset& key) { return c.items < key; });
  if (it == level.end() || it->items != items) return std::nullopt;
  return it->count;
}

std::vector<CountedItemset> FrequentItemsets::flatten() const {
  std::vector<CountedItemset> out;
  out.reserve(size());
  for (const auto& level : by_level) out.insert(out.end(), level.begin(), level.end());
  return out;
}

FrequentItemsets FrequentItemsets::restricted_to(std::size_t floor) const {
  FrequentItemsets out = *this;
  out.min_count = std::max(min_count, floor);
  for (auto& level : out.by_level) {
    std::erase_if(level, [&](const CountedItemset& c) { return c.count < floor; });
  }
  while (!out.by_level.empty() && out.by_level.back().empty()) out.by_level.pop_back();
  return out;
}

bool same_itemsets(const FrequentItemsets& a, const FrequentItemsets& b) {
  return a.n_rows == b.n_rows && a.by_level == b.by_level;
}

MinCount min_count_for_support(double min_support, std::size_t n_rows) {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw Error("thresholds", fmt::format("min-support must lie in (0,1], got {}", min_support));
  }
  return MinCount{std::max<std::size_t>(1, min_count_at_least(min_support, n_rows))};
}

std::vector<std::vector<CountedItemset>> group_by_level(std::vector<CountedItemset> itemsets) {
  std::vector<std::vector<CountedItemset>> levels;
  for (auto& c : itemsets) {
    if (c.items.empty()) continue;
    if (levels.size() < c.items.size()) levels.resize(c.items.size());
    levels[c.items.size() - 1].push_back(std::move(c));
  }
  for (auto& level : levels) std::sort(level.begin(), level.end(), by_items);
  while (!levels.empty() && levels.back().empty()) levels.pop_back();
  return levels;
}

}  // namespace armforge
