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

#ifndef ARMFORGE_CORE_HPP_
#define ARMFORGE_CORE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace armforge {

// All module errors carry a short machine-readable code ("empty-db",
// "arity", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message);

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

using ItemId = std::uint32_t;

struct Item {
  std::string attribute;
  std::string value;

  auto operator<=>(const Item&) const = default;
};

// Strictly ascending, duplicate-free sequence of item ids. Construction from
// arbitrary input canonicalizes, so set equality is sequence equality.
class Itemset {
 public:
  Itemset() = default;
  Itemset(std::initializer_list<ItemId> ids);
  explicit Itemset(std::vector<ItemId> ids);

  // Skips canonicalization; the caller guarantees strict ascending order.
  static Itemset from_sorted(std::vector<ItemId> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  ItemId operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  std::span<const ItemId> ids() const noexcept { return ids_; }

  bool contains(ItemId id) const;
  // True when every item of `other` is in this set.
  bool includes(const Itemset& other) const;
  Itemset with(ItemId id) const;
  Itemset without(ItemId id) const;

  auto operator<=>(const Itemset&) const = default;

 private:
  std::vector<ItemId> ids_;
};

struct ItemsetHash {
  std::size_t operator()(const Itemset& s) const noexcept;
};

using Transaction = Itemset;

// Bidirectional Item <-> ItemId map. Ids are dense and assigned in
// first-interning order.
class ItemDictionary {
 public:
  ItemId intern(const std::string& attribute, const std::string& value);
  std::optional<ItemId> find(const std::string& attribute, const std::string& value) const;
  ItemId at(const std::string& attribute, const std::string& value) const;

  const Item& item(ItemId id) const;
  std::size_t size() const noexcept { return items_.size(); }

  // Attribute names in first-occurrence order.
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  // Index into attributes() of the item's attribute.
  std::size_t attribute_index(ItemId id) const;
  std::optional<std::size_t> find_attribute(std::string_view name) const;
  // All item ids of one attribute, ascending.
  std::vector<ItemId> items_of(std::string_view attribute) const;

  // Attributes whose items render as the bare value ("Male" rather than
  // "Sex=Male"). The value must not contain '=', '<' or '>'.
  void set_value_only(std::string_view attribute);
  bool value_only(std::size_t attribute_index) const;

  // "attr=value", "attr<18" when the value already starts with a comparison
  // operator, or just "value" for value-only attributes.
  std::string render(ItemId id) const;
  std::string render(const Itemset& items, std::string_view separator = " & ") const;

 private:
  std::vector<Item> items_;
  std::vector<std::size_t> item_attribute_;
  std::vector<std::string> attributes_;
  std::vector<bool> value_only_;
  std::map<Item, ItemId> index_;
};

// Parses the rendering produced by ItemDictionary::render(ItemId).
// Inverse of ItemDictionary::render. A bare token (no '=', '<' or '>')
// yields an item with an empty attribute.
Item parse_rendered_item(std::string_view text);

// Immutable encoded item-basket view of a categorical table.
class TransactionDb {
 public:
  TransactionDb(std::shared_ptr<const ItemDictionary> dictionary,
                std::vector<Transaction> transactions,
                std::optional<std::string> target_attribute = std::nullopt);

  std::size_t n_rows() const noexcept { return transactions_.size(); }
  const std::vector<Transaction>& transactions() const noexcept { return transactions_; }
  const ItemDictionary& dictionary() const noexcept { return *dictionary_; }
  const std::shared_ptr<const ItemDictionary>& dictionary_ptr() const noexcept { return dictionary_; }
  const std::optional<std::string>& target_attribute() const noexcept { return target_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  // Per-item occurrence counts, indexed by ItemId.
  std::vector<std::size_t> item_counts() const;
  // Number of distinct items that occur in at least one transaction.
  std::size_t distinct_items() const;

 private:
  std::shared_ptr<const ItemDictionary> dictionary_;
  std::vector<Transaction> transactions_;
  std::optional<std::string> target_;
  std::uint64_t fingerprint_ = 0;
};

// Builds a TransactionDb from (attribute, value) rows.
class TransactionDbBuilder {
 public:
  void add_row(const std::vector<std::pair<std::string, std::string>>& cells);
  void set_value_only(std::string_view attribute) { dictionary_->set_value_only(attribute); }
  TransactionDb build(std::optional<std::string> target_attribute = std::nullopt) &&;

 private:
  std::shared_ptr<ItemDictionary> dictionary_ = std::make_shared<ItemDictionary>();
  std::vector<Transaction> rows_;
};

struct SupportInterval {
  double lo = 0.2;  // exclusive
  double hi = 0.4;  // inclusive

  bool contains(double support) const noexcept { return support > lo && support <= hi; }
};

struct Thresholds {
  double min_prob = 0.2;
  double min_support = 0.7;
  double min_confidence = 0.9;
  double min_cpir = 0.6;
  SupportInterval exception_support{};

  // Throws Error("thresholds") when an invariant is broken.
  void validate() const;
};

enum class RuleKind { common, exception, reference };

std::string_view to_string(RuleKind kind);
RuleKind rule_kind_from_string(std::string_view text);

struct Rule {
  Itemset antecedent;
  ItemId consequent = 0;
  double support = 0.0;
  double confidence = 0.0;
  double cpir = 0.0;
  RuleKind kind = RuleKind::reference;
  std::size_t antecedent_count = 0;
  std::size_t joint_count = 0;
  std::size_t consequent_count = 0;
};

// Measures. Counts come from a linear scan of `db`.
std::size_t count_containing(const TransactionDb& db, const Itemset& itemset);

double item_probability(const TransactionDb& db, ItemId item);
double combo_probability(const TransactionDb& db, const Itemset& pair);
double support(const TransactionDb& db, const Itemset& itemset);
double confidence(const TransactionDb& db, const Itemset& antecedent, ItemId consequent);
double cpir_positive(const TransactionDb& db, const Itemset& antecedent, ItemId consequent);
double cpir_negative(const TransactionDb& db, const Itemset& antecedent, ItemId consequent);

// The same two measures from supports directly.
double cpir_positive_from_supports(double sup_xy, double sup_x, double sup_y);
double cpir_negative_from_supports(double sup_xy, double sup_x, double sup_y);

// Scores X => Y from raw counts and classifies it against `thresholds`.
// Rules whose consequent occurs in every row have no defined CPIR and come
// back as reference.
Rule score_rule(Itemset antecedent, ItemId consequent, std::size_t antecedent_count,
                std::size_t joint_count, std::size_t consequent_count, std::size_t n_rows,
                const Thresholds& thresholds);

RuleKind classify(double support, double confidence, double cpir, const Thresholds& thresholds);

// Smallest integer count c with c/n >= fraction.
std::size_t min_count_at_least(double fraction, std::size_t n);
// Smallest integer count c with c/n > fraction.
std::size_t min_count_above(double fraction, std::size_t n);
// Count floor covering both rule families: support >= min_support or
// support inside the exception interval. Never below 1.
std::size_t rule_support_floor(const Thresholds& thresholds, std::size_t n);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);

}  // namespace armforge

#endif  // ARMFORGE_CORE_HPP_
