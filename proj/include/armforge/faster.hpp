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

#ifndef ARMFORGE_FASTER_HPP_
#define ARMFORGE_FASTER_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "armforge/core.hpp"
#include "armforge/frequent.hpp"

namespace armforge {

// Probability prefilter applied before level-wise mining.
//
// Items whose relative frequency is below min_prob are removed, pairs of
// surviving items below min_prob are excluded from level-2 seeding, and the
// reduced database keeps only surviving items (rows left empty are dropped).
// Supports computed later still divide by rows_before.
struct PrefilterReport {
  std::vector<ItemId> surviving_items;
  std::vector<ItemId> removed_items;
  std::vector<CountedItemset> surviving_pairs;
  std::size_t excluded_pairs = 0;
  // Pairs whose probability was evaluated.
  std::size_t pairs_evaluated = 0;
  // Occurrence count of every item in the original database.
  std::vector<std::size_t> item_counts;
  TransactionDb db_reduced;
  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  double min_prob = 0.0;
  std::uint64_t job_id = 0;
};

PrefilterReport prefilter(const TransactionDb& db, double min_prob);

// Level-wise mining over a database that shrinks every iteration. Mines every
// itemset needed by both rule families (rule_support_floor), with counts
// against the original row count.
FrequentItemsets mine_frequent_faster(const TransactionDb& db, const Thresholds& thresholds,
                                      const MinerOptions& options = {});

// Per-iteration size of the working database for one faster job. Step 0 is
// the input, step 1 the prefiltered database, then one step per level.
struct ReductionTrace {
  std::vector<ReductionStep> steps;
  std::size_t iteration_count = 0;
};

ReductionTrace explain_reduction(const PrefilterReport& report, const FrequentItemsets& freq);

// Identifies a faster job by input database and prefilter cutoff.
std::uint64_t faster_job_id(const TransactionDb& db, double min_prob);

}  // namespace armforge

#endif  // ARMFORGE_FASTER_HPP_
