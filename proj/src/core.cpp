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

#include "armforge/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace armforge {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

// ---------------------------------------------------------------------------
// Itemset

Itemset::Itemset(std::initializer_list<ItemId> ids) : Itemset(std::vector<ItemId>(ids)) {}

Itemset::Itemset(std::vector<ItemId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

Itemset Itemset::from_sorted(std::vector<ItemId> ids) {
  Itemset s;
  s.ids_ = std::move(ids);
  return s;
}

bool Itemset::contains(ItemId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool Itemset::includes(const Itemset& other) const {
  return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end());
}

Itemset Itemset::with(ItemId id) const {
  std::vector<ItemId> out;
  out.reserve(ids_.size() + 1);
  auto pos = std::lower_bound(ids_.begin(), ids_.end(), id);
  out.insert(out.end(), ids_.begin(), pos);
  if (pos == ids_.end() || *pos != id) out.push_back(id);
  out.insert(out.end(), pos, ids_.end());
  return from_sorted(std::move(out));
}

Itemset Itemset::without(ItemId id) const {
  std::vector<ItemId> out;
  out.reserve(ids_.size());
  for (ItemId x : ids_) {
    if (x != id) out.push_back(x);
  }
  return from_sorted(std::move(out));
}

std::size_t ItemsetHash::operator()(const Itemset& s) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (ItemId id : s) {
    h ^= id;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// ItemDictionary

ItemId ItemDictionary::intern(const std::string& attribute, const std::string& value) {
  Item key{attribute, value};
  if (auto it = index_.find(key); it != index_.end()) return it->second;

  auto attr = find_attribute(attribute);
  if (!attr) {
    attributes_.push_back(attribute);
    attr = attributes_.size() - 1;
  }
  const auto id = static_cast<ItemId>(items_.size());
  items_.push_back(key);
  item_attribute_.push_back(*attr);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<ItemId> ItemDictionary::find(const std::string& attribute,
                                           const std::string& value) const {
  auto it = index_.find(Item{attribute, value});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ItemId ItemDictionary::at(const std::string& attribute, const std::string& value) const {
  if (auto id = find(attribute, value)) return *id;
  throw Error("unknown-item", fmt::format("unknown item {}={}", attribute, value));
}

const Item& ItemDictionary::item(ItemId id) const {
  if (id >= items_.size()) {
    throw Error("unknown-item", fmt::format("item id {} outside dictionary of {}", id, items_.size()));
  }
  return items_[id];
}

std::size_t ItemDictionary::attribute_index(ItemId id) const {
  item(id);
  return item_attribute_[id];
}

std::optional<std::size_t> ItemDictionary::find_attribute(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<ItemId> ItemDictionary::items_of(std::string_view attribute) const {
  std::vector<ItemId> out;
  auto attr = find_attribute(attribute);
  if (!attr) return out;
  for (ItemId id = 0; id < items_.size(); ++id) {
    if (item_attribute_[id] == *attr) out.push_back(id);
  }
  return out;
}

namespace {

bool starts_with_comparison(std::string_view value) {
  return !value.empty() && (value.front() == '<' || value.front() == '>');
}

}  // namespace

void ItemDictionary::set_value_only(std::string_view attribute) {
  auto attr = find_attribute(attribute);
  if (!attr) {
    attributes_.emplace_back(attribute);
    attr = attributes_.size() - 1;
  }
  if (value_only_.size() <= *attr) value_only_.resize(*attr + 1, false);
  value_only_[*attr] = true;
}

bool ItemDictionary::value_only(std::size_t attribute_index) const {
  return attribute_index < value_only_.size() && value_only_[attribute_index];
}

std::string ItemDictionary::render(ItemId id) const {
  const Item& it = item(id);
  if (value_only(item_attribute_[id])) return it.value;
  if (starts_with_comparison(it.value)) return it.attribute + it.value;
  return it.attribute + "=" + it.value;
}

std::string ItemDictionary::render(const Itemset& items, std::string_view separator) const {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += separator;
    out += render(items[i]);
  }
  return out;
}

Item parse_rendered_item(std::string_view text) {
  const auto pos = text.find_first_of("=<>");
  if (pos == std::string_view::npos && !text.empty()) return Item{"", std::string(text)};
  if (pos == std::string_view::npos || pos == 0) {
    throw Error("parse", fmt::format("malformed item '{}'", text));
  }
  Item out;
  out.attribute = std::string(text.substr(0, pos));
  out.value = text[pos] == '=' ? std::string(text.substr(pos + 1)) : std::string(text.substr(pos));
  return out;
}

// ---------------------------------------------------------------------------
// TransactionDb

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::uint64_t fingerprint_of(const ItemDictionary& dict, const std::vector<Transaction>& rows,
                             const std::optional<std::string>& target) {
  std::uint64_t h = fnv1a("armforge-db");
  for (ItemId id = 0; id < dict.size(); ++id) {
    const Item& it = dict.item(id);
    h = fnv1a(it.attribute, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
    h = fnv1a(it.value, h);
    h = fnv1a(std::string_view("\x1e", 1), h);
  }
  for (const auto& t : rows) {
    for (ItemId id : t) {
      h = fnv1a(std::string_view(reinterpret_cast<const char*>(&id), sizeof id), h);
    }
    h = fnv1a(std::string_view("\n", 1), h);
  }
  if (target) h = fnv1a(*target, h);
  return h;
}

}  // namespace

TransactionDb::TransactionDb(std::shared_ptr<const ItemDictionary> dictionary,
                             std::vector<Transaction> transactions,
                             std::optional<std::string> target_attribute)
    : dictionary_(std::move(dictionary)),
      transactions_(std::move(transactions)),
      target_(std::move(target_attribute)) {
  if (!dictionary_) throw Error("invalid-db", "transaction database needs a dictionary");

  std::optional<std::size_t> target_index;
  if (target_) {
    target_index = dictionary_->find_attribute(*target_);
    if (!target_index) {
      throw Error("invalid-db", fmt::format("target attribute '{}' not in dictionary", *target_));
    }
  }

  std::vector<std::size_t> seen(dictionary_->attributes().size(), 0);
  for (std::size_t row = 0; row < transactions_.size(); ++row) {
    const auto& t = transactions_[row];
    std::size_t target_items = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= dictionary_->size()) {
        throw Error("invalid-db", fmt::format("row {} references unknown item {}", row, t[i]));
      }
      if (i && t[i - 1] >= t[i]) {
        throw Error("invalid-db", fmt::format("row {} is not strictly ascending", row));
      }
      const auto attr = dictionary_->attribute_index(t[i]);
      if (seen[attr] == row + 1) {
        throw Error("invalid-db",
                    fmt::format("row {} holds two values of '{}'", row, dictionary_->attributes()[attr]));
      }
      seen[attr] = row + 1;
      if (target_index && attr == *target_index) ++target_items;
    }
    if (target_index && target_items != 1) {
      throw Error("invalid-db", fmt::format("row {} has no value for target '{}'", row, *target_));
    }
  }
  fingerprint_ = fingerprint_of(*dictionary_, transactions_, target_);
}

std::vector<std::size_t> TransactionDb::item_counts() const {
  std::vector<std::size_t> counts(dictionary_->size(), 0);
  for (const auto& t : transactions_) {
    for (ItemId id : t) ++counts[id];
  }
  return counts;
}

std::size_t TransactionDb::distinct_items() const {
  const auto counts = item_counts();
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

void TransactionDbBuilder::add_row(const std::vector<std::pair<std::string, std::string>>& cells) {
  std::vector<ItemId> ids;
  ids.reserve(cells.size());
  for (const auto& [attribute, value] : cells) ids.push_back(dictionary_->intern(attribute, value));
  rows_.emplace_back(std::move(ids));
}

TransactionDb TransactionDbBuilder::build(std::optional<std::string> target_attribute) && {
  return TransactionDb(std::move(dictionary_), std::move(rows_), std::move(target_attribute));
}

// ---------------------------------------------------------------------------
// Thresholds and rules

namespace {

bool is_fraction(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void Thresholds::validate() const {
  const std::pair<const char*, double> fractions[] = {
      {"min-prob", min_prob},
      {"min-support", min_support},
      {"min-confidence", min_confidence},
      {"min-cpir", min_cpir},
      {"exception lo", exception_support.lo},
      {"exception hi", exception_support.hi},
  };
  for (const auto& [name, value] : fractions) {
    if (!is_fraction(value)) {
      throw Error("thresholds", fmt::format("{} must lie in [0,1], got {}", name, value));
    }
  }
  if (!(exception_support.lo < exception_support.hi)) {
    throw Error("thresholds", fmt::format("exception interval ({}, {}] is empty",
                                          exception_support.lo, exception_support.hi));
  }
  if (exception_support.hi > min_support) {
    throw Error("thresholds", fmt::format("exception upper bound {} exceeds min-support {}",
                                          exception_support.hi, min_support));
  }
}

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::common:
      return "common";
    case RuleKind::exception:
      return "exception";
    case RuleKind::reference:
      return "reference";
  }
  return "reference";
}

RuleKind rule_kind_from_string(std::string_view text) {
  if (text == "common") return RuleKind::common;
  if (text == "exception") return RuleKind::exception;
  if (text == "reference") return RuleKind::reference;
  throw Error("parse", fmt::format("unknown rule kind '{}'", text));
}

// ---------------------------------------------------------------------------
// Measures

std::size_t count_containing(const TransactionDb& db, const Itemset& itemset) {
  std::size_t n = 0;
  for (const auto& t : db.transactions()) {
    if (t.includes(itemset)) ++n;
  }
  return n;
}

namespace {

void require_rows(const TransactionDb& db) {
  if (db.n_rows() == 0) throw Error("empty-db", "transaction database is empty");
}

double fraction(std::size_t count, std::size_t n) {
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace

double item_probability(const TransactionDb& db, ItemId item) {
  require_rows(db);
  db.dictionary().item(item);
  return fraction(count_containing(db, Itemset{item}), db.n_rows());
}

double combo_probability(const TransactionDb& db, const Itemset& pair) {
  if (pair.size() != 2) {
    throw Error("arity", fmt::format("combination probability takes 2 items, got {}", pair.size()));
  }
  require_rows(db);
  for (ItemId id : pair) db.dictionary().item(id);
  return fraction(count_containing(db, pair), db.n_rows());
}

double support(const TransactionDb& db, const Itemset& itemset) {
  if (itemset.empty()) return 1.0;
  require_rows(db);
  return fraction(count_containing(db, itemset), db.n_rows());
}

double confidence(const TransactionDb& db, const Itemset& antecedent, ItemId consequent) {
  require_rows(db);
  const auto base = count_containing(db, antecedent);
  if (base == 0) throw Error("zero-antecedent", "antecedent never occurs");
  return fraction(count_containing(db, antecedent.with(consequent)), base);
}

double cpir_positive_from_supports(double sup_xy, double sup_x, double sup_y) {
  if (!(sup_x > 0.0)) throw Error("zero-antecedent", "antecedent never occurs");
  if (!(sup_y < 1.0)) throw Error("degenerate-consequent", "consequent occurs in every row");
  return (sup_xy - sup_x * sup_y) / (sup_x * (1.0 - sup_y));
}

double cpir_negative_from_supports(double sup_xy, double sup_x, double sup_y) {
  if (!(sup_x > 0.0)) throw Error("zero-antecedent", "antecedent never occurs");
  if (!(sup_y > 0.0)) throw Error("degenerate-consequent", "consequent never occurs");
  const double sup_x_not_y = sup_x - sup_xy;
  const double sup_not_y = 1.0 - sup_y;
  return (sup_x_not_y - sup_x * sup_not_y) / (sup_x * sup_y);
}

double cpir_positive(const TransactionDb& db, const Itemset& antecedent, ItemId consequent) {
  require_rows(db);
  return cpir_positive_from_supports(support(db, antecedent.with(consequent)), support(db, antecedent),
                                     support(db, Itemset{consequent}));
}

double cpir_negative(const TransactionDb& db, const Itemset& antecedent, ItemId consequent) {
  require_rows(db);
  return cpir_negative_from_supports(support(db, antecedent.with(consequent)), support(db, antecedent),
                                     support(db, Itemset{consequent}));
}

RuleKind classify(double support, double confidence, double cpir, const Thresholds& t) {
  if (!(confidence >= t.min_confidence) || !(cpir >= t.min_cpir)) return RuleKind::reference;
  if (support >= t.min_support) return RuleKind::common;
  if (t.exception_support.contains(support)) return RuleKind::exception;
  return RuleKind::reference;
}

Rule score_rule(Itemset antecedent, ItemId consequent, std::size_t antecedent_count,
                std::size_t joint_count, std::size_t consequent_count, std::size_t n_rows,
                const Thresholds& thresholds) {
  Rule r;
  r.antecedent = std::move(antecedent);
  r.consequent = consequent;
  r.antecedent_count = antecedent_count;
  r.joint_count = joint_count;
  r.consequent_count = consequent_count;
  r.support = fraction(joint_count, n_rows);
  r.confidence = fraction(joint_count, antecedent_count);
  if (consequent_count == n_rows) {
    r.cpir = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.cpir = cpir_positive_from_supports(r.support, fraction(antecedent_count, n_rows),
                                         fraction(consequent_count, n_rows));
  }
  r.kind = classify(r.support, r.confidence, r.cpir, thresholds);
  return r;
}

std::size_t min_count_at_least(double f, std::size_t n) {
  auto c = static_cast<std::size_t>(std::max(0.0, std::ceil(f * static_cast<double>(n))));
  while (c > 0 && fraction(c - 1, n) >= f) --c;
  while (c <= n && fraction(c, n) < f) ++c;
  return c;
}

std::size_t min_count_above(double f, std::size_t n) {
  auto c = static_cast<std::size_t>(std::max(0.0, std::floor(f * static_cast<double>(n))));
  while (c > 0 && fraction(c - 1, n) > f) --c;
  while (c <= n && !(fraction(c, n) > f)) ++c;
  return c;
}

std::size_t rule_support_floor(const Thresholds& t, std::size_t n) {
  if (n == 0) return 1;
  const auto common = min_count_at_least(t.min_support, n);
  const auto exception = min_count_above(t.exception_support.lo, n);
  return std::max<std::size_t>(1, std::min(common, exception));
}

}  // namespace armforge
