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

#include "armforge/apriori.hpp"

#include <algorithm>
#include <thread>

namespace armforge {

namespace apriori {

namespace {

bool has_itemset(const std::vector<CountedItemset>& level, const std::vector<ItemId>& key) {
  auto it = std::lower_bound(level.begin(), level.end(), key, [](const CountedItemset& c, const auto& k) {
    return std::lexicographical_compare(c.items.begin(), c.items.end(), k.begin(), k.end());
  });
  return it != level.end() && std::equal(it->items.begin(), it->items.end(), key.begin(), key.end());
}

bool same_prefix(const Itemset& a, const Itemset& b) {
  return std::equal(a.begin(), a.end() - 1, b.begin());
}

}  // namespace

std::vector<Itemset> generate_candidates(const std::vector<CountedItemset>& level) {
  std::vector<Itemset> out;
  if (level.empty()) return out;
  const std::size_t k = level.front().items.size();

  std::vector<ItemId> candidate(k + 1);
  std::vector<ItemId> subset(k);
  for (std::size_t i = 0; i < level.size(); ++i) {
    const Itemset& a = level[i].items;
    for (std::size_t j = i + 1; j < level.size() && same_prefix(a, level[j].items); ++j) {
      const Itemset& b = level[j].items;
      std::copy(a.begin(), a.end(), candidate.begin());
      candidate[k] = b[k - 1];

      // Dropping either of the last two items gives a or b; check the rest.
      bool keep = true;
      for (std::size_t drop = 0; keep && drop + 2 <= k; ++drop) {
        std::size_t w = 0;
        for (std::size_t r = 0; r <= k; ++r) {
          if (r != drop) subset[w++] = candidate[r];
        }
        keep = has_itemset(level, subset);
      }
      if (keep) out.push_back(Itemset::from_sorted(candidate));
    }
  }
  return out;
}

namespace {

void count_range(std::span<const Transaction> transactions, const std::vector<Itemset>& candidates,
                 std::vector<std::size_t>& counts) {
  for (const auto& t : transactions) {
    if (t.empty()) continue;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (t.includes(candidates[c])) ++counts[c];
    }
  }
}

}  // namespace

std::vector<std::size_t> count_candidates(std::span<const Transaction> transactions,
                                          const std::vector<Itemset>& candidates, unsigned threads) {
  std::vector<std::size_t> counts(candidates.size(), 0);
  if (candidates.empty() || transactions.empty()) return counts;

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(transactions.size())));
  if (threads == 1) {
    count_range(transactions, candidates, counts);
    return counts;
  }

  std::vector<std::vector<std::size_t>> partial(threads, std::vector<std::size_t>(candidates.size(), 0));
  std::vector<std::thread> workers;
  const std::size_t chunk = (transactions.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = std::min(transactions.size(), w * chunk);
    const std::size_t end = std::min(transactions.size(), begin + chunk);
    workers.emplace_back([&, w, begin, end] {
      count_range(transactions.subspan(begin, end - begin), candidates, partial[w]);
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& p : partial) {
    for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += p[c];
  }
  return counts;
}

}  // namespace apriori

FrequentItemsets mine_frequent_apriori(const TransactionDb& db, double min_support,
                                       const MinerOptions& options) {
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");
  return mine_frequent_apriori(db, min_count_for_support(min_support, db.n_rows()), options);
}

FrequentItemsets mine_frequent_apriori(const TransactionDb& db, MinCount min_count,
                                       const MinerOptions& options) {
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");

  FrequentItemsets out;
  out.n_rows = db.n_rows();
  out.min_count = std::max<std::size_t>(1, min_count.value);
  out.db_fingerprint = db.fingerprint();

  // Level 1: every dictionary item is a candidate.
  const auto item_counts = db.item_counts();
  out.candidate_count = item_counts.size();
  out.iteration_count = 1;
  std::vector<CountedItemset> level;
  for (ItemId id = 0; id < item_counts.size(); ++id) {
    if (item_counts[id] >= out.min_count) level.push_back({Itemset::from_sorted({id}), item_counts[id]});
  }

  const std::span<const Transaction> rows(db.transactions());
  while (!level.empty()) {
    auto candidates = apriori::generate_candidates(level);
    out.by_level.push_back(std::move(level));
    if (candidates.empty()) break;

    ++out.iteration_count;
    out.candidate_count += candidates.size();
    const auto counts = apriori::count_candidates(rows, candidates, options.threads);
    level.clear();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (counts[c] >= out.min_count) level.push_back({std::move(candidates[c]), counts[c]});
    }
  }
  return out;
}

}  // namespace armforge
