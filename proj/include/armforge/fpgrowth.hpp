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

#ifndef ARMFORGE_FPGROWTH_HPP_
#define ARMFORGE_FPGROWTH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "armforge/core.hpp"
#include "armforge/frequent.hpp"

namespace armforge {

// Prefix tree over the frequent items of a database. Nodes live in an arena;
// index 0 is the root sentinel.
class FpTree {
 public:
  static constexpr std::int32_t kNone = -1;
  static constexpr std::int32_t kRoot = 0;

  struct Node {
    ItemId item = 0;
    std::size_t count = 0;
    std::int32_t parent = kNone;
    std::int32_t first_child = kNone;
    std::int32_t next_sibling = kNone;
    // Next node holding the same item (header chain).
    std::int32_t next_same = kNone;
  };

  struct HeaderEntry {
    ItemId item = 0;
    std::size_t count = 0;
    std::int32_t head = kNone;
  };

  // `weighted_rows` are item lists with multiplicities. Items below
  // `min_count` in total are dropped.
  FpTree(std::span<const std::pair<std::vector<ItemId>, std::size_t>> weighted_rows, std::size_t min_count);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  // Descending count, ties by ascending item id.
  const std::vector<HeaderEntry>& header() const noexcept { return header_; }
  std::size_t min_count() const noexcept { return min_count_; }

  bool empty() const noexcept { return nodes_.size() == 1; }
  bool is_single_path() const;
  // Items on the root-to-node path, root side first, excluding the root.
  std::vector<ItemId> path_to(std::int32_t node) const;
  // Multiset of (path, multiplicity) that rebuilds the projected rows.
  std::vector<std::pair<std::vector<ItemId>, std::size_t>> reconstruct() const;

 private:
  void insert(const std::vector<ItemId>& ordered, std::size_t count);

  std::vector<Node> nodes_;
  std::vector<HeaderEntry> header_;
  std::vector<std::int32_t> header_tail_;
  std::vector<std::size_t> rank_;
  std::size_t min_count_ = 1;
};

FpTree build_fptree(const TransactionDb& db, double min_support);
FpTree build_fptree(const TransactionDb& db, MinCount min_count);

FrequentItemsets mine_fpgrowth(const TransactionDb& db, double min_support);
FrequentItemsets mine_fpgrowth(const TransactionDb& db, MinCount min_count);

}  // namespace armforge

#endif  // ARMFORGE_FPGROWTH_HPP_
