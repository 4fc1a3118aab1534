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

// Self-consistency gate: the other suites trust these fixtures.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "armforge/core.hpp"
#include "support/oracle.hpp"

using namespace armforge;
using namespace armforge::testing;

TEST_CASE("every fixture's expected table matches the naive scan") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const Fixture f = load_fixture(name);
    const TransactionDb db = db_from_csv(f.csv_text);
    REQUIRE_FALSE(f.expected.empty());
    for (const auto& [text, count] : f.expected) {
      CAPTURE(text);
      const auto items = parse_itemset(db.dictionary(), text);
      REQUIRE(items.has_value());
      CHECK(naive_count(db, *items) == count);
    }
  }
}

TEST_CASE("naive count basics") {
  const TransactionDb db = fixture_db("measure5");
  SUBCASE("empty itemset counts every row") { CHECK(naive_count(db, Itemset{}) == db.n_rows()); }
  SUBCASE("singletons equal dictionary frequencies") {
    const auto counts = db.item_counts();
    for (ItemId id = 0; id < db.dictionary().size(); ++id) CHECK(naive_count(db, Itemset{id}) == counts[id]);
  }
}

TEST_CASE("naive count agrees with support on random itemsets") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const TransactionDb db = random_db(rng, {.max_items = 12, .max_rows = 64, .skew = 0.5, .missing = 0.1});
    std::vector<ItemId> ids;
    for (ItemId id = 0; id < db.dictionary().size(); ++id) {
      if (rng() % 3 == 0) ids.push_back(id);
    }
    const Itemset s(ids);
    const double n = static_cast<double>(db.n_rows());
    CHECK(std::abs(support(db, s) * n - static_cast<double>(naive_count(db, s))) <= 1e-12 * n);
    CHECK(count_containing(db, s) == naive_count(db, s));
  }
}
