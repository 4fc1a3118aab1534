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

#ifndef ARMFORGE_APRIORI_HPP_
#define ARMFORGE_APRIORI_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "armforge/core.hpp"
#include "armforge/frequent.hpp"

namespace armforge {

// Classic level-wise Apriori. Every level rescans the full input database.
FrequentItemsets mine_frequent_apriori(const TransactionDb& db, double min_support,
                                       const MinerOptions& options = {});
FrequentItemsets mine_frequent_apriori(const TransactionDb& db, MinCount min_count,
                                       const MinerOptions& options = {});

// Building blocks shared with the faster miner.
namespace apriori {

// Prefix join of sorted level-k itemsets followed by the subset prune.
// Output is sorted.
std::vector<Itemset> generate_candidates(const std::vector<CountedItemset>& level);

// Occurrence count of every candidate over `transactions`.
std::vector<std::size_t> count_candidates(std::span<const Transaction> transactions,
                                          const std::vector<Itemset>& candidates,
                                          unsigned threads = 1);

}  // namespace apriori

}  // namespace armforge

#endif  // ARMFORGE_APRIORI_HPP_
