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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "armforge/apriori.hpp"
#include "armforge/fpgrowth.hpp"
#include "support/oracle.hpp"

using namespace armforge;
using namespace armforge::testing;

namespace {

std::vector<std::vector<CountedItemset>> oracle_levels(const TransactionDb& db, std::size_t min_count) {
  return group_by_level(enumerate_frequent(db, min_count));
}

using Multiset = std::map<std::vector<ItemId>, std::size_t>;

Multiset rows_multiset(const TransactionDb& db, std::size_t min_count) {
  const auto counts = db.item_counts();
  Multiset out;
  for (const auto& t : db.transactions()) {
    std::vector<ItemId> kept;
    for (ItemId id : t) {
      if (counts[id] >= min_count) kept.push_back(id);
    }
    if (!kept.empty()) ++out[kept];
  }
  return out;
}

}  // namespace

TEST_CASE("apriori on the five-row fixture") {
  const TransactionDb db = fixture_db("measure5");
  SUBCASE("nothing reaches full support") {
    const auto f = mine_frequent_apriori(db, 1.0);
    CHECK(f.size() == 0);
    CHECK(f.iteration_count == 1);
    CHECK(f.candidate_count == db.dictionary().size());
  }
  SUBCASE("support 0.4 equals the exhaustive table") {
    const auto f = mine_frequent_apriori(db, 0.4);
    CHECK(f.min_count == 2);
    CHECK(f.by_level == oracle_levels(db, 2));
    const Fixture fx = load_fixture("measure5");
    std::size_t expected = 0;
    for (const auto& [text, count] : fx.expected) {
      if (!text.empty() && count >= 2) {
        ++expected;
        const auto items = parse_itemset(db.dictionary(), text);
        REQUIRE(items.has_value());
        CHECK(f.count_of(*items) == std::optional<std::size_t>(count));
      }
    }
    CHECK(f.size() == expected);
  }
  SUBCASE("support out of range") {
    CHECK_THROWS_AS(mine_frequent_apriori(db, 0.0), Error);
    CHECK_THROWS_AS(mine_frequent_apriori(db, 1.5), Error);
  }
}

TEST_CASE("candidate generation joins on the prefix and prunes") {
  const std::vector<CountedItemset> level = {
      {Itemset{1, 2}, 3}, {Itemset{1, 3}, 3}, {Itemset{1, 4}, 3}, {Itemset{2, 3}, 3}};
  const auto c = apriori::generate_candidates(level);
  // {1,2,4} and {1,3,4} lose a subset; {1,2,3} survives.
  CHECK(c == std::vector<Itemset>{Itemset{1, 2, 3}});
  CHECK(apriori::generate_candidates({}).empty());
}

TEST_CASE("threaded counting matches single-threaded counting") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 64, .skew = 0.5});
    std::vector<Itemset> candidates;
    for (ItemId a = 0; a < db.dictionary().size(); ++a) {
      for (ItemId b = a + 1; b < db.dictionary().size(); ++b) candidates.push_back(Itemset{a, b});
    }
    const auto one = apriori::count_candidates(db.transactions(), candidates, 1);
    for (unsigned threads : {2u, 3u, 8u}) CHECK(apriori::count_candidates(db.transactions(), candidates, threads) == one);
    for (std::size_t c = 0; c < candidates.size(); ++c) CHECK(one[c] == naive_count(db, candidates[c]));
    const auto f1 = mine_frequent_apriori(db, MinCount{2});
    const auto f4 = mine_frequent_apriori(db, MinCount{2}, {.threads = 4});
    CHECK(same_itemsets(f1, f4));
  }
}

TEST_CASE("FP-tree structure") {
  SUBCASE("single path") {
    auto dict = std::make_shared<ItemDictionary>();
    const ItemId a = dict->intern("A", "1");
    const ItemId b = dict->intern("B", "1");
    const ItemId c = dict->intern("C", "1");
    const TransactionDb db(dict, {Itemset{a, b, c}, Itemset{a, b}, Itemset{a}});
    const FpTree tree = build_fptree(db, MinCount{1});
    CHECK(tree.is_single_path());
    CHECK(tree.nodes().size() == 4);
    REQUIRE(tree.header().size() == 3);
    CHECK(tree.header()[0].item == a);
    CHECK(tree.header()[0].count == 3);
    CHECK(tree.header()[2].item == c);
    CHECK(tree.header()[2].count == 1);
    CHECK(tree.path_to(tree.header()[2].head) == std::vector<ItemId>{a, b, c});
  }
  SUBCASE("root only") {
    const TransactionDb db = fixture_db("measure5");
    const FpTree tree = build_fptree(db, MinCount{6});
    CHECK(tree.empty());
    CHECK(tree.header().empty());
    CHECK(mine_fpgrowth(db, MinCount{6}).size() == 0);
  }
  SUBCASE("header counts and reconstruction") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 40, .skew = 0.6, .missing = 0.2});
      const std::size_t min_count = 1 + trial % 3;
      const FpTree tree = build_fptree(db, MinCount{min_count});
      const auto counts = db.item_counts();
      std::size_t frequent_items = 0;
      for (ItemId id = 0; id < counts.size(); ++id) frequent_items += counts[id] >= min_count ? 1 : 0;
      CHECK(tree.header().size() == frequent_items);
      for (std::size_t h = 0; h < tree.header().size(); ++h) {
        const auto& e = tree.header()[h];
        CHECK(e.count == counts[e.item]);
        if (h) {
          const auto& p = tree.header()[h - 1];
          CHECK((p.count > e.count || (p.count == e.count && p.item < e.item)));
        }
        // Chain sums to the item count.
        std::size_t chain = 0;
        for (auto n = e.head; n != FpTree::kNone; n = tree.nodes()[n].next_same) chain += tree.nodes()[n].count;
        CHECK(chain == e.count);
      }
      Multiset rebuilt;
      for (auto& [path, mult] : tree.reconstruct()) {
        std::sort(path.begin(), path.end());
        rebuilt[path] += mult;
      }
      CHECK(rebuilt == rows_multiset(db, min_count));
    }
  }
}

TEST_CASE("FP-growth and apriori agree with the exhaustive oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 60, .skew = 0.4 + 0.005 * trial});
    const std::size_t min_count = 1 + rng() % 4;
    const auto expected = oracle_levels(db, min_count);
    const auto ap = mine_frequent_apriori(db, MinCount{min_count});
    const auto fp = mine_fpgrowth(db, MinCount{min_count});
    CHECK(ap.by_level == expected);
    CHECK(fp.by_level == expected);
    CHECK(same_itemsets(ap, fp));
    CHECK(fp.db_fingerprint == db.fingerprint());

    // Downward closure.
    for (const auto& c : ap.flatten()) {
      for (ItemId id : c.items) {
        const Itemset sub = c.items.without(id);
        if (sub.empty()) continue;
        const auto sub_count = ap.count_of(sub);
        REQUIRE(sub_count.has_value());
        CHECK(*sub_count >= c.count);
      }
    }
  }
}

TEST_CASE("restricting to a higher floor equals mining at that floor") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 50, .skew = 0.6});
    const auto low = mine_frequent_apriori(db, MinCount{1});
    for (std::size_t floor : {2u, 3u, 5u}) {
      CHECK(same_itemsets(low.restricted_to(floor), mine_frequent_apriori(db, MinCount{floor})));
    }
  }
}

TEST_CASE("empty database is rejected") {
  auto dict = std::make_shared<ItemDictionary>();
  dict->intern("A", "1");
  const TransactionDb empty(dict, {});
  CHECK_THROWS_AS(mine_frequent_apriori(empty, MinCount{1}), Error);
  CHECK_THROWS_AS(mine_fpgrowth(empty, MinCount{1}), Error);
}
