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

#ifndef ARMFORGE_RULEGEN_HPP_
#define ARMFORGE_RULEGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "armforge/core.hpp"
#include "armforge/frequent.hpp"

namespace armforge {

struct RuleSet {
  // Sorted by kind, descending confidence, descending cpir, antecedent,
  // consequent. Never holds reference rules.
  std::vector<Rule> rules;
  Thresholds thresholds;
  std::uint64_t db_fingerprint = 0;
  std::size_t n_rows = 0;
  std::optional<std::string> target_attribute;
  std::shared_ptr<const ItemDictionary> dictionary;

  std::size_t count(RuleKind kind) const;
  // Content hash over the rules and their counts.
  std::uint64_t fingerprint() const;
};

// Scores every single-consequent split of every frequent itemset of size >= 2.
// With a target attribute only consequents of that attribute are kept.
RuleSet generate_rules(const FrequentItemsets& freq, const TransactionDb& db, const Thresholds& thresholds,
                       const std::optional<std::string>& target = std::nullopt);

// Exhaustive reference: enumerates every itemset of the database by bitmask,
// counts it by scanning, and classifies every split. Refuses more than 20
// distinct items.
RuleSet brute_force_oracle(const TransactionDb& db, const Thresholds& thresholds,
                           const std::optional<std::string>& target = std::nullopt);

enum class RuleFormat { csv, jsonl };

RuleFormat rule_format_from_string(std::string_view text);

// CSV columns: antecedent,consequent,support,confidence,cpir,kind with
// fractions printed to 6 decimals. JSONL adds the raw counts.
std::string format_rules(const RuleSet& rules, RuleFormat format);
void export_rules(const RuleSet& rules, RuleFormat format, const std::string& path);

// One parsed CSV row of an exported rule file.
struct RuleRecord {
  std::vector<Item> antecedent;
  Item consequent;
  double support = 0.0;
  double confidence = 0.0;
  double cpir = 0.0;
  RuleKind kind = RuleKind::reference;
};

std::vector<RuleRecord> parse_rules_csv(const std::string& text);
std::vector<RuleRecord> read_rules_csv(const std::string& path);

// Sort order used by RuleSet.
bool rule_order(const Rule& a, const Rule& b);

}  // namespace armforge

#endif  // ARMFORGE_RULEGEN_HPP_
