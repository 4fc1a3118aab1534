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

#ifndef ARMFORGE_FREQUENT_HPP_
#define ARMFORGE_FREQUENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "armforge/core.hpp"

namespace armforge {

struct CountedItemset {
  Itemset items;
  std::size_t count = 0;

  bool operator==(const CountedItemset&) const = default;
};

// Size of the working database at one point of a mining job.
struct ReductionStep {
  std::size_t iteration = 0;
  std::size_t rows = 0;
  std::size_t items = 0;
  std::size_t occurrences = 0;

  bool operator==(const ReductionStep&) const = default;
};

// Minimum absolute frequency an itemset needs to be kept.
struct MinCount {
  std::size_t value = 1;
};

struct MinerOptions {
  // Worker threads for support counting. Results do not depend on it.
  unsigned threads = 1;
};

// Output of every miner. Level k lives at by_level[k - 1] and is sorted
// lexicographically, so two complete results compare equal with ==.
struct FrequentItemsets {
  std::vector<std::vector<CountedItemset>> by_level;
  std::size_t n_rows = 0;
  std::size_t min_count = 1;
  std::size_t candidate_count = 0;
  std::size_t iteration_count = 0;
  std::uint64_t db_fingerprint = 0;
  // Set by the faster miner only.
  std::uint64_t job_id = 0;
  std::vector<ReductionStep> reduction;

  std::size_t size() const;
  std::size_t max_level() const { return by_level.size(); }
  std::optional<std::size_t> count_of(const Itemset& items) const;
  std::vector<CountedItemset> flatten() const;
  // Copy holding only itemsets with count >= min_count.
  FrequentItemsets restricted_to(std::size_t min_count) const;
};

// Same itemsets with the same counts; work counters are ignored.
bool same_itemsets(const FrequentItemsets& a, const FrequentItemsets& b);

// Converts a support fraction in (0,1] to a count floor over n rows.
MinCount min_count_for_support(double min_support, std::size_t n_rows);

// Sorts itemsets into levels. Used by miners that discover itemsets out of
// level order.
std::vector<std::vector<CountedItemset>> group_by_level(std::vector<CountedItemset> itemsets);

}  // namespace armforge

#endif  // ARMFORGE_FREQUENT_HPP_
