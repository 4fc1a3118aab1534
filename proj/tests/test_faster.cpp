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
#include <random>

#include "armforge/apriori.hpp"
#include "armforge/csv.hpp"
#include "armforge/faster.hpp"
#include "support/oracle.hpp"

using namespace armforge;
using namespace armforge::testing;

namespace {

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// Random but valid thresholds with min_prob at or below the exception floor.
Thresholds random_thresholds(std::mt19937_64& rng) {
  Thresholds t;
  t.min_support = 0.3 + 0.1 * static_cast<double>(rng() % 6);
  t.exception_support.lo = 0.05 * static_cast<double>(1 + rng() % 4);
  t.exception_support.hi = std::min(t.min_support, t.exception_support.lo + 0.2);
  t.min_prob = t.exception_support.lo * static_cast<double>(rng() % 3) / 2.0;
  t.min_confidence = 0.5;
  t.min_cpir = 0.1;
  return t;
}

}  // namespace

TEST_CASE("prefilter at zero keeps everything") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 10, .max_rows = 30, .skew = 0.5});
    const PrefilterReport r = prefilter(db, 0.0);
    CHECK(r.removed_items.empty());
    CHECK(r.surviving_items.size() == db.dictionary().size());
    CHECK(r.db_reduced.transactions() == db.transactions());
    CHECK(r.excluded_pairs == 0);
    const std::size_t s = r.surviving_items.size();
    CHECK(r.pairs_evaluated == s * (s - 1) / 2);
  }
}

TEST_CASE("prefilter at one keeps only universal items") {
  auto dict = std::make_shared<ItemDictionary>();
  const ItemId all = dict->intern("A", "x");
  const ItemId some = dict->intern("B", "y");
  const TransactionDb db(dict, {Itemset{all, some}, Itemset{all}});
  const PrefilterReport r = prefilter(db, 1.0);
  CHECK(r.surviving_items == std::vector<ItemId>{all});
  CHECK(r.removed_items == std::vector<ItemId>{some});
  CHECK(r.db_reduced.transactions() == std::vector<Transaction>{Itemset{all}, Itemset{all}});
  CHECK(error_code([&] { prefilter(db, 1.5); }) == "thresholds");
}

TEST_CASE("prefilter on the five-row fixture") {
  const TransactionDb db = fixture_db("measure5");
  const PrefilterReport r = prefilter(db, 0.4);
  std::vector<std::string> removed;
  for (ItemId id : r.removed_items) removed.push_back(db.dictionary().render(id));
  std::sort(removed.begin(), removed.end());
  CHECK(removed == std::vector<std::string>{"A=a2", "C=c3"});
  for (const auto& p : r.surviving_pairs) {
    CHECK(p.count == naive_count(db, p.items));
    CHECK(p.count >= 2);
  }
  CHECK(r.rows_before == 5);
  CHECK(r.rows_after == 5);
}

TEST_CASE("prefilter never drops an item of a frequent itemset") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 50, .skew = 0.6, .missing = 0.1});
    const double min_prob = 0.1 * static_cast<double>(rng() % 5);
    const PrefilterReport r = prefilter(db, min_prob);
    const std::size_t floor = std::max<std::size_t>(1, min_count_at_least(min_prob, db.n_rows()));
    for (const auto& c : enumerate_frequent(db, floor)) {
      for (ItemId id : c.items) {
        CHECK(std::binary_search(r.surviving_items.begin(), r.surviving_items.end(), id));
      }
      if (c.items.size() == 2) {
        CHECK(std::find_if(r.surviving_pairs.begin(), r.surviving_pairs.end(),
                           [&](const CountedItemset& p) { return p.items == c.items; }) != r.surviving_pairs.end());
      }
    }
  }
}

TEST_CASE("faster miner equals the exhaustive oracle at the rule floor") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 60, .skew = 0.7, .missing = 0.05});
    const Thresholds t = random_thresholds(rng);
    const std::size_t floor = rule_support_floor(t, db.n_rows());
    const auto f = mine_frequent_faster(db, t);
    CHECK(f.min_count == floor);
    CHECK(f.by_level == group_by_level(enumerate_frequent(db, floor)));

    const auto ap = mine_frequent_apriori(db, MinCount{floor});
    CHECK(same_itemsets(f, ap));
    CHECK(f.candidate_count <= ap.candidate_count);

    // Working set only shrinks.
    for (std::size_t s = 1; s < f.reduction.size(); ++s) {
      CHECK(f.reduction[s].rows <= f.reduction[s - 1].rows);
      CHECK(f.reduction[s].items <= f.reduction[s - 1].items);
      CHECK(f.reduction[s].occurrences <= f.reduction[s - 1].occurrences);
      CHECK(f.reduction[s].iteration == s);
    }
  }
}

TEST_CASE("faster miner results do not depend on thread count") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 64, .skew = 0.8});
    const Thresholds t = random_thresholds(rng);
    const auto one = mine_frequent_faster(db, t);
    const auto four = mine_frequent_faster(db, t, {.threads = 4});
    CHECK(same_itemsets(one, four));
    CHECK(one.reduction == four.reduction);
    CHECK(one.candidate_count == four.candidate_count);
  }
}

TEST_CASE("single transaction") {
  auto dict = std::make_shared<ItemDictionary>();
  const ItemId a = dict->intern("A", "1");
  const ItemId b = dict->intern("B", "1");
  const ItemId c = dict->intern("C", "1");
  const TransactionDb db(dict, {Itemset{a, b, c}});
  const auto f = mine_frequent_faster(db, Thresholds{});
  CHECK(f.size() == 7);
  CHECK(f.count_of(Itemset{a, b, c}) == std::optional<std::size_t>(1));
  CHECK(f.max_level() == 3);
}

TEST_CASE("nothing to prune leaves the working set intact until it runs out") {
  auto dict = std::make_shared<ItemDictionary>();
  const ItemId a = dict->intern("A", "1");
  const ItemId b = dict->intern("B", "1");
  const TransactionDb db(dict, {Itemset{a, b}, Itemset{a, b}, Itemset{a, b}});
  Thresholds t;
  t.min_prob = 0.0;
  const auto f = mine_frequent_faster(db, t);
  REQUIRE(f.reduction.size() == 4);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(f.reduction[s].rows == 3);
    CHECK(f.reduction[s].items == 2);
    CHECK(f.reduction[s].occurrences == 6);
  }
  CHECK(f.reduction[3].rows == 0);
}

TEST_CASE("pruning trace matches the hand-derived fixture") {
  const TransactionDb db = fixture_db("pruning");
  Thresholds t;
  t.min_prob = 0.2;
  t.min_support = 0.5;
  t.exception_support = {0.3, 0.4};
  REQUIRE(rule_support_floor(t, db.n_rows()) == 4);

  const auto f = mine_frequent_faster(db, t);
  const auto records = csv::parse(csv::read_file(fixture_path("pruning_trace.csv")));
  std::vector<ReductionStep> expected;
  for (std::size_t i = 1; i < records.size(); ++i) {
    expected.push_back({std::stoul(records[i][0]), std::stoul(records[i][1]), std::stoul(records[i][2]),
                        std::stoul(records[i][3])});
  }
  CHECK(f.reduction == expected);

  const PrefilterReport report = prefilter(db, t.min_prob);
  const ReductionTrace trace = explain_reduction(report, f);
  CHECK(trace.steps == expected);
  CHECK(trace.iteration_count == f.iteration_count);

  CHECK(error_code([&] { explain_reduction(prefilter(db, 0.1), f); }) == "job-mismatch");
  CHECK(error_code([&] { explain_reduction(report, mine_frequent_apriori(db, MinCount{4})); }) == "job-mismatch");
}

TEST_CASE("faster output restricted to the common floor loses nothing") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 60, .skew = 0.75});
    const Thresholds t = random_thresholds(rng);
    const auto f = mine_frequent_faster(db, t);
    const std::size_t common = min_count_for_support(t.min_support, db.n_rows()).value;
    CHECK(same_itemsets(f.restricted_to(common), mine_frequent_apriori(db, MinCount{common})));
  }
}

TEST_CASE("invalid thresholds and empty database") {
  const TransactionDb db = fixture_db("measure5");
  Thresholds bad;
  bad.min_prob = -0.1;
  CHECK(error_code([&] { mine_frequent_faster(db, bad); }) == "thresholds");
  auto dict = std::make_shared<ItemDictionary>();
  dict->intern("A", "1");
  CHECK(error_code([&] { mine_frequent_faster(TransactionDb(dict, {}), Thresholds{}); }) == "empty-db");
}
