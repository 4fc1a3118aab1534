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

#include "armforge/faster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <span>

#include <fmt/format.h>

#include "armforge/apriori.hpp"

namespace armforge {

std::uint64_t faster_job_id(const TransactionDb& db, double min_prob) {
  const std::uint64_t fp = db.fingerprint();
  const auto prob_bits = std::bit_cast<std::uint64_t>(min_prob);
  std::uint64_t h = fnv1a("faster-job");
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(&fp), sizeof fp), h);
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(&prob_bits), sizeof prob_bits), h);
  return h == 0 ? 1 : h;
}

namespace {

ReductionStep measure(std::size_t iteration, std::span<const Transaction> rows, std::size_t dictionary_size) {
  ReductionStep step;
  step.iteration = iteration;
  step.rows = rows.size();
  std::vector<bool> present(dictionary_size, false);
  for (const auto& t : rows) {
    step.occurrences += t.size();
    for (ItemId id : t) {
      if (!present[id]) {
        present[id] = true;
        ++step.items;
      }
    }
  }
  return step;
}

double fraction(std::size_t count, std::size_t n) {
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace

PrefilterReport prefilter(const TransactionDb& db, double min_prob) {
  if (!(std::isfinite(min_prob) && min_prob >= 0.0 && min_prob <= 1.0)) {
    throw Error("thresholds", fmt::format("min-prob must lie in [0,1], got {}", min_prob));
  }
  const std::size_t n = db.n_rows();
  const std::size_t dict_size = db.dictionary().size();
  auto item_counts = db.item_counts();

  // Item probabilities.
  std::vector<ItemId> surviving;
  std::vector<ItemId> removed;
  std::vector<bool> keep(dict_size, false);
  for (ItemId id = 0; id < dict_size; ++id) {
    if (n > 0 && fraction(item_counts[id], n) >= min_prob) {
      surviving.push_back(id);
      keep[id] = true;
    } else {
      removed.push_back(id);
    }
  }

  // Project rows onto surviving items.
  std::vector<Transaction> reduced;
  reduced.reserve(n);
  std::vector<ItemId> buf;
  for (const auto& t : db.transactions()) {
    buf.clear();
    for (ItemId id : t) {
      if (keep[id]) buf.push_back(id);
    }
    if (!buf.empty()) reduced.push_back(Itemset::from_sorted(buf));
  }

  // Pair probabilities over surviving items, upper-triangular counts.
  const std::size_t s = surviving.size();
  std::vector<std::size_t> slot(dict_size, 0);
  for (std::size_t i = 0; i < s; ++i) slot[surviving[i]] = i;
  std::vector<std::size_t> pair_counts(s * s, 0);
  for (const auto& t : reduced) {
    for (std::size_t a = 0; a < t.size(); ++a) {
      const std::size_t row = slot[t[a]] * s;
      for (std::size_t b = a + 1; b < t.size(); ++b) ++pair_counts[row + slot[t[b]]];
    }
  }
  std::vector<CountedItemset> pairs;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      const std::size_t c = pair_counts[i * s + j];
      if (n > 0 && fraction(c, n) >= min_prob) {
        pairs.push_back({Itemset::from_sorted({surviving[i], surviving[j]}), c});
      } else {
        ++excluded;
      }
    }
  }

  const std::size_t rows_after = reduced.size();
  return PrefilterReport{
      .surviving_items = std::move(surviving),
      .removed_items = std::move(removed),
      .surviving_pairs = std::move(pairs),
      .excluded_pairs = excluded,
      .pairs_evaluated = s * (s > 0 ? s - 1 : 0) / 2,
      .item_counts = std::move(item_counts),
      .db_reduced = TransactionDb(db.dictionary_ptr(), std::move(reduced), std::nullopt),
      .rows_before = n,
      .rows_after = rows_after,
      .min_prob = min_prob,
      .job_id = faster_job_id(db, min_prob),
  };
}

FrequentItemsets mine_frequent_faster(const TransactionDb& db, const Thresholds& thresholds,
                                      const MinerOptions& options) {
  thresholds.validate();
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");

  const std::size_t dict_size = db.dictionary().size();
  const PrefilterReport report = prefilter(db, thresholds.min_prob);

  FrequentItemsets out;
  out.n_rows = db.n_rows();
  out.min_count = rule_support_floor(thresholds, db.n_rows());
  out.db_fingerprint = db.fingerprint();
  out.job_id = report.job_id;
  out.reduction.push_back(measure(0, db.transactions(), dict_size));

  std::vector<Transaction> working = report.db_reduced.transactions();
  out.reduction.push_back(measure(1, working, dict_size));

  // Level 1 straight from the prefilter's item counts.
  out.candidate_count = report.surviving_items.size();
  out.iteration_count = 1;
  std::vector<CountedItemset> level;
  for (ItemId id : report.surviving_items) {
    if (report.item_counts[id] >= out.min_count) {
      level.push_back({Itemset::from_sorted({id}), report.item_counts[id]});
    }
  }

  std::vector<bool> alive(dict_size);
  std::vector<ItemId> buf;
  std::size_t k = 1;
  while (!level.empty()) {
    // Rewrite the working database: only items of surviving level-k itemsets
    // stay, and rows too short to hold a (k+1)-itemset go.
    std::fill(alive.begin(), alive.end(), false);
    for (const auto& c : level) {
      for (ItemId id : c.items) alive[id] = true;
    }
    std::size_t w = 0;
    for (auto& t : working) {
      buf.clear();
      for (ItemId id : t) {
        if (alive[id]) buf.push_back(id);
      }
      if (buf.size() > k) working[w++] = Itemset::from_sorted(buf);
    }
    working.resize(w);
    out.reduction.push_back(measure(k + 1, working, dict_size));

    std::vector<CountedItemset> next;
    if (k == 1) {
      // Level 2 is seeded with pairs that passed the probability cutoff; their
      // counts are already known.
      std::size_t seeded = 0;
      for (const auto& p : report.surviving_pairs) {
        if (!alive[p.items[0]] || !alive[p.items[1]]) continue;
        ++seeded;
        if (p.count >= out.min_count) next.push_back(p);
      }
      out.by_level.push_back(std::move(level));
      if (seeded == 0) break;
      ++out.iteration_count;
      out.candidate_count += seeded;
    } else {
      auto candidates = apriori::generate_candidates(level);
      out.by_level.push_back(std::move(level));
      if (candidates.empty()) break;
      ++out.iteration_count;
      out.candidate_count += candidates.size();
      const auto counts = apriori::count_candidates(working, candidates, options.threads);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (counts[c] >= out.min_count) next.push_back({std::move(candidates[c]), counts[c]});
      }
    }
    level = std::move(next);
    ++k;
  }
  return out;
}

ReductionTrace explain_reduction(const PrefilterReport& report, const FrequentItemsets& freq) {
  if (freq.job_id == 0 || freq.job_id != report.job_id) {
    throw Error("job-mismatch", "prefilter report and frequent itemsets come from different jobs");
  }
  if (freq.reduction.size() < 2 || freq.reduction[1].rows != report.rows_after) {
    throw Error("job-mismatch", "frequent itemsets carry no matching reduction record");
  }
  return ReductionTrace{freq.reduction, freq.iteration_count};
}

}  // namespace armforge
