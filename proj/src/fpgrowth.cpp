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

#include "armforge/fpgrowth.hpp"

#include <algorithm>
#include <limits>

namespace armforge {

namespace {

constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

using WeightedRows = std::vector<std::pair<std::vector<ItemId>, std::size_t>>;

}  // namespace

FpTree::FpTree(std::span<const std::pair<std::vector<ItemId>, std::size_t>> weighted_rows,
               std::size_t min_count)
    : min_count_(std::max<std::size_t>(1, min_count)) {
  nodes_.push_back(Node{});

  ItemId max_id = 0;
  for (const auto& [row, weight] : weighted_rows) {
    for (ItemId id : row) max_id = std::max(max_id, id);
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_id) + 1, 0);
  for (const auto& [row, weight] : weighted_rows) {
    for (ItemId id : row) counts[id] += weight;
  }

  for (ItemId id = 0; id < counts.size(); ++id) {
    if (counts[id] >= min_count_) header_.push_back({id, counts[id], kNone});
  }
  std::stable_sort(header_.begin(), header_.end(), [](const HeaderEntry& a, const HeaderEntry& b) {
    return a.count != b.count ? a.count > b.count : a.item < b.item;
  });
  rank_.assign(counts.size(), kUnranked);
  for (std::size_t r = 0; r < header_.size(); ++r) rank_[header_[r].item] = r;
  header_tail_.assign(header_.size(), kNone);

  std::vector<ItemId> ordered;
  for (const auto& [row, weight] : weighted_rows) {
    ordered.clear();
    for (ItemId id : row) {
      if (rank_[id] != kUnranked) ordered.push_back(id);
    }
    if (ordered.empty() || weight == 0) continue;
    std::sort(ordered.begin(), ordered.end(), [&](ItemId a, ItemId b) { return rank_[a] < rank_[b]; });
    insert(ordered, weight);
  }
}

void FpTree::insert(const std::vector<ItemId>& ordered, std::size_t count) {
  std::int32_t at = kRoot;
  for (ItemId id : ordered) {
    std::int32_t child = nodes_[at].first_child;
    while (child != kNone && nodes_[child].item != id) child = nodes_[child].next_sibling;
    if (child == kNone) {
      child = static_cast<std::int32_t>(nodes_.size());
      Node n;
      n.item = id;
      n.parent = at;
      n.next_sibling = nodes_[at].first_child;
      nodes_.push_back(n);
      nodes_[at].first_child = child;

      const std::size_t r = rank_[id];
      if (header_tail_[r] == kNone) {
        header_[r].head = child;
      } else {
        nodes_[header_tail_[r]].next_same = child;
      }
      header_tail_[r] = child;
    }
    nodes_[child].count += count;
    at = child;
  }
}

bool FpTree::is_single_path() const {
  for (const auto& n : nodes_) {
    if (n.first_child != kNone && nodes_[n.first_child].next_sibling != kNone) return false;
  }
  return true;
}

std::vector<ItemId> FpTree::path_to(std::int32_t node) const {
  std::vector<ItemId> path;
  for (std::int32_t at = node; at != kRoot && at != kNone; at = nodes_[at].parent) {
    path.push_back(nodes_[at].item);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::pair<std::vector<ItemId>, std::size_t>> FpTree::reconstruct() const {
  std::vector<std::pair<std::vector<ItemId>, std::size_t>> out;
  for (std::int32_t i = 1; i < static_cast<std::int32_t>(nodes_.size()); ++i) {
    std::size_t ending = nodes_[i].count;
    for (std::int32_t c = nodes_[i].first_child; c != kNone; c = nodes_[c].next_sibling) {
      ending -= nodes_[c].count;
    }
    if (ending > 0) out.emplace_back(path_to(i), ending);
  }
  return out;
}

namespace {

WeightedRows rows_of(const TransactionDb& db) {
  WeightedRows rows;
  rows.reserve(db.n_rows());
  for (const auto& t : db.transactions()) rows.emplace_back(std::vector<ItemId>(t.begin(), t.end()), 1);
  return rows;
}

struct GrowthState {
  std::size_t min_count = 1;
  std::vector<CountedItemset> found;
  std::size_t candidates = 0;
};

void emit(GrowthState& st, const std::vector<ItemId>& items, std::size_t count) {
  st.found.push_back({Itemset(items), count});
}

void grow(const FpTree& tree, std::vector<ItemId>& suffix, GrowthState& st) {
  const auto& nodes = tree.nodes();

  if (tree.is_single_path()) {
    // Every combination of path nodes is frequent; its count is that of the
    // deepest chosen node.
    std::vector<std::int32_t> path;
    for (std::int32_t at = nodes[FpTree::kRoot].first_child; at != FpTree::kNone; at = nodes[at].first_child) {
      path.push_back(at);
    }
    const std::size_t len = path.size();
    std::vector<ItemId> items;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << len); ++mask) {
      items = suffix;
      std::size_t count = 0;
      for (std::size_t b = 0; b < len; ++b) {
        if (mask & (std::uint64_t{1} << b)) {
          items.push_back(nodes[path[b]].item);
          count = nodes[path[b]].count;
        }
      }
      emit(st, items, count);
    }
    return;
  }

  const auto& header = tree.header();
  for (auto entry = header.rbegin(); entry != header.rend(); ++entry) {
    suffix.push_back(entry->item);
    emit(st, suffix, entry->count);

    WeightedRows base;
    for (std::int32_t n = entry->head; n != FpTree::kNone; n = nodes[n].next_same) {
      auto prefix = tree.path_to(nodes[n].parent);
      if (!prefix.empty()) base.emplace_back(std::move(prefix), nodes[n].count);
    }
    if (!base.empty()) {
      FpTree conditional(base, st.min_count);
      // Every distinct item tallied in the conditional base.
      std::vector<ItemId> seen;
      for (const auto& [row, w] : base) seen.insert(seen.end(), row.begin(), row.end());
      std::sort(seen.begin(), seen.end());
      st.candidates += static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
      if (!conditional.empty()) grow(conditional, suffix, st);
    }
    suffix.pop_back();
  }
}

}  // namespace

FpTree build_fptree(const TransactionDb& db, double min_support) {
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");
  return build_fptree(db, min_count_for_support(min_support, db.n_rows()));
}

FpTree build_fptree(const TransactionDb& db, MinCount min_count) {
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");
  const auto rows = rows_of(db);
  return FpTree(rows, min_count.value);
}

FrequentItemsets mine_fpgrowth(const TransactionDb& db, double min_support) {
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");
  return mine_fpgrowth(db, min_count_for_support(min_support, db.n_rows()));
}

FrequentItemsets mine_fpgrowth(const TransactionDb& db, MinCount min_count) {
  const FpTree tree = build_fptree(db, min_count);

  GrowthState st;
  st.min_count = tree.min_count();
  st.candidates = db.dictionary().size();
  std::vector<ItemId> suffix;
  if (!tree.empty()) grow(tree, suffix, st);

  FrequentItemsets out;
  out.n_rows = db.n_rows();
  out.min_count = tree.min_count();
  out.db_fingerprint = db.fingerprint();
  out.candidate_count = st.candidates;
  out.by_level = group_by_level(std::move(st.found));
  out.iteration_count = std::max<std::size_t>(1, out.by_level.size());
  return out;
}

}  // namespace armforge
