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

#include "oracle.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "armforge/csv.hpp"

#ifndef ARMFORGE_FIXTURE_DIR
#error "ARMFORGE_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace armforge::testing {

std::size_t naive_count(const TransactionDb& db, const Itemset& itemset) {
  std::size_t n = 0;
  for (const auto& row : db.transactions()) {
    bool all = true;
    for (ItemId want : itemset) {
      bool found = false;
      for (ItemId have : row) {
        if (have == want) {
          found = true;
          break;
        }
      }
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) ++n;
  }
  return n;
}

std::string fixture_path(const std::string& file) { return std::string(ARMFORGE_FIXTURE_DIR) + "/" + file; }

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"measure5", "cpir25", "separable", "pruning"};
  return names;
}

Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  f.csv_text = slurp(fixture_path(name + ".csv"));
  const auto records = csv::parse(slurp(fixture_path(name + "_counts.csv")));
  for (std::size_t i = 1; i < records.size(); ++i) {
    f.expected[records[i].at(0)] = std::stoul(records[i].at(1));
  }
  return f;
}

TransactionDb db_from_csv(const std::string& text, std::optional<std::string> target) {
  const auto records = csv::parse(text);
  if (records.empty()) throw std::runtime_error("fixture without header");
  TransactionDbBuilder builder;
  for (std::size_t r = 1; r < records.size(); ++r) {
    std::vector<std::pair<std::string, std::string>> cells;
    for (std::size_t c = 0; c < records[0].size(); ++c) cells.emplace_back(records[0][c], records[r].at(c));
    builder.add_row(cells);
  }
  return std::move(builder).build(std::move(target));
}

TransactionDb fixture_db(const std::string& name, std::optional<std::string> target) {
  return db_from_csv(slurp(fixture_path(name + ".csv")), std::move(target));
}

std::optional<Itemset> parse_itemset(const ItemDictionary& dict, const std::string& text) {
  std::vector<ItemId> ids;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto sep = rest.find(" & ");
    const std::string token(rest.substr(0, sep));
    const auto eq = token.find('=');
    if (eq == std::string::npos) return std::nullopt;
    const auto id = dict.find(token.substr(0, eq), token.substr(eq + 1));
    if (!id) return std::nullopt;
    ids.push_back(*id);
    if (sep == std::string_view::npos) break;
    rest.remove_prefix(sep + 3);
  }
  return Itemset(std::move(ids));
}

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

TransactionDb random_db(std::mt19937_64& rng, const RandomDbSpec& spec) {
  // Attribute layout first: value counts summing to at most max_items.
  std::vector<std::size_t> values;
  std::size_t total = 0;
  const std::size_t n_attr = 1 + rng() % 5;
  for (std::size_t a = 0; a < n_attr; ++a) {
    std::size_t v = 1 + rng() % 4;
    if (spec.with_target && a + 1 == n_attr) v = std::max<std::size_t>(v, 2);
    if (total + v > spec.max_items) v = spec.max_items - total;
    if (v == 0) break;
    values.push_back(v);
    total += v;
  }
  const std::size_t rows = 1 + rng() % spec.max_rows;

  TransactionDbBuilder builder;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::pair<std::string, std::string>> cells;
    for (std::size_t a = 0; a < values.size(); ++a) {
      const bool is_target = spec.with_target && a + 1 == values.size();
      if (!is_target && spec.missing > 0.0 && unit(rng) < spec.missing) continue;
      std::size_t v = 0;
      if (values[a] > 1 && unit(rng) >= spec.skew) v = 1 + rng() % (values[a] - 1);
      const std::string name = is_target ? "Class" : "T" + std::to_string(a);
      cells.emplace_back(name, "v" + std::to_string(v));
    }
    builder.add_row(cells);
  }
  return std::move(builder).build(spec.with_target ? std::optional<std::string>("Class") : std::nullopt);
}

std::vector<CountedItemset> enumerate_frequent(const TransactionDb& db, std::size_t min_count) {
  std::vector<ItemId> items;
  const auto counts = db.item_counts();
  for (ItemId id = 0; id < counts.size(); ++id) {
    if (counts[id] > 0) items.push_back(id);
  }
  if (items.size() > 16) throw std::runtime_error("enumerate_frequent: too many items");
  std::vector<CountedItemset> out;
  for (std::uint32_t mask = 1; mask < (1u << items.size()); ++mask) {
    std::vector<ItemId> ids;
    for (std::size_t b = 0; b < items.size(); ++b) {
      if (mask & (1u << b)) ids.push_back(items[b]);
    }
    Itemset s(std::move(ids));
    const std::size_t c = naive_count(db, s);
    if (c >= min_count && c > 0) out.push_back({std::move(s), c});
  }
  return out;
}

}  // namespace armforge::testing
