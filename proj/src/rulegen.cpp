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

#include "armforge/rulegen.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>
#include <json.hpp>

#include "armforge/csv.hpp"

namespace armforge {

bool rule_order(const Rule& a, const Rule& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.cpir != b.cpir) return a.cpir > b.cpir;
  if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
  return a.consequent < b.consequent;
}

std::size_t RuleSet::count(RuleKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.kind == kind; }));
}

std::uint64_t RuleSet::fingerprint() const {
  std::uint64_t h = fnv1a("armforge-rules");
  auto mix = [&h](std::uint64_t v) { h = fnv1a(std::string_view(reinterpret_cast<const char*>(&v), sizeof v), h); };
  mix(db_fingerprint);
  for (const auto& r : rules) {
    for (ItemId id : r.antecedent) mix(id);
    mix(0xffffffffULL);
    mix(r.consequent);
    mix(r.joint_count);
    mix(r.antecedent_count);
    mix(r.consequent_count);
    mix(static_cast<std::uint64_t>(r.kind));
  }
  return h;
}

namespace {

std::optional<std::size_t> resolve_target(const ItemDictionary& dict, const std::optional<std::string>& target) {
  if (!target) return std::nullopt;
  auto index = dict.find_attribute(*target);
  if (!index) throw Error("unknown-attribute", fmt::format("target attribute '{}' not in dictionary", *target));
  return index;
}

RuleSet make_rule_set(const TransactionDb& db, const Thresholds& thresholds,
                      const std::optional<std::string>& target, std::vector<Rule> rules) {
  std::sort(rules.begin(), rules.end(), rule_order);
  RuleSet out;
  out.rules = std::move(rules);
  out.thresholds = thresholds;
  out.db_fingerprint = db.fingerprint();
  out.n_rows = db.n_rows();
  out.target_attribute = target;
  out.dictionary = db.dictionary_ptr();
  return out;
}

}  // namespace

RuleSet generate_rules(const FrequentItemsets& freq, const TransactionDb& db, const Thresholds& thresholds,
                       const std::optional<std::string>& target) {
  if (freq.db_fingerprint != db.fingerprint() || freq.n_rows != db.n_rows()) {
    throw Error("fingerprint-mismatch", "frequent itemsets were not mined from this database");
  }
  thresholds.validate();
  const ItemDictionary& dict = db.dictionary();
  const auto target_index = resolve_target(dict, target);

  std::vector<Rule> rules;
  for (std::size_t level = 1; level < freq.by_level.size(); ++level) {
    for (const auto& joint : freq.by_level[level]) {
      for (ItemId consequent : joint.items) {
        if (target_index && dict.attribute_index(consequent) != *target_index) continue;
        Itemset antecedent = joint.items.without(consequent);
        const auto antecedent_count = freq.count_of(antecedent);
        const auto consequent_count = freq.count_of(Itemset{consequent});
        if (!antecedent_count || !consequent_count) {
          throw Error("incomplete", "frequent itemsets are not downward closed");
        }
        Rule r = score_rule(std::move(antecedent), consequent, *antecedent_count, joint.count, *consequent_count,
                            freq.n_rows, thresholds);
        if (r.kind != RuleKind::reference) rules.push_back(std::move(r));
      }
    }
  }
  return make_rule_set(db, thresholds, target, std::move(rules));
}

RuleSet brute_force_oracle(const TransactionDb& db, const Thresholds& thresholds,
                           const std::optional<std::string>& target) {
  thresholds.validate();
  const ItemDictionary& dict = db.dictionary();
  const auto target_index = resolve_target(dict, target);

  std::vector<ItemId> items;
  {
    const auto counts = db.item_counts();
    for (ItemId id = 0; id < counts.size(); ++id) {
      if (counts[id] > 0) items.push_back(id);
    }
  }
  if (items.size() > 20) {
    throw Error("oracle-too-large", fmt::format("{} distinct items exceed the oracle limit of 20", items.size()));
  }
  if (items.empty() || db.n_rows() == 0) return make_rule_set(db, thresholds, target, {});

  const std::size_t d = items.size();
  std::vector<std::size_t> local(dict.size(), 0);
  for (std::size_t i = 0; i < d; ++i) local[items[i]] = i;

  // count[mask] = rows containing every item of mask: histogram of row masks
  // followed by a superset-sum over each bit.
  std::vector<std::size_t> count(std::size_t{1} << d, 0);
  for (const auto& t : db.transactions()) {
    std::uint32_t mask = 0;
    for (ItemId id : t) mask |= 1u << local[id];
    ++count[mask];
  }
  for (std::size_t bit = 0; bit < d; ++bit) {
    for (std::uint32_t mask = 0; mask < count.size(); ++mask) {
      if (!(mask & (1u << bit))) count[mask] += count[mask | (1u << bit)];
    }
  }

  auto to_itemset = [&](std::uint32_t mask) {
    std::vector<ItemId> ids;
    for (std::size_t b = 0; b < d; ++b) {
      if (mask & (1u << b)) ids.push_back(items[b]);
    }
    return Itemset::from_sorted(std::move(ids));
  };

  std::vector<Rule> rules;
  for (std::uint32_t mask = 0; mask < count.size(); ++mask) {
    if (std::popcount(mask) < 2 || count[mask] == 0) continue;
    for (std::size_t b = 0; b < d; ++b) {
      const std::uint32_t bit = 1u << b;
      if (!(mask & bit)) continue;
      if (target_index && dict.attribute_index(items[b]) != *target_index) continue;
      Rule r = score_rule(to_itemset(mask ^ bit), items[b], count[mask ^ bit], count[mask], count[bit],
                          db.n_rows(), thresholds);
      if (r.kind != RuleKind::reference) rules.push_back(std::move(r));
    }
  }
  return make_rule_set(db, thresholds, target, std::move(rules));
}

RuleFormat rule_format_from_string(std::string_view text) {
  if (text == "csv") return RuleFormat::csv;
  if (text == "jsonl") return RuleFormat::jsonl;
  throw Error("config", fmt::format("unknown rule format '{}'", text));
}

namespace {

constexpr const char* kCsvHeader = "antecedent,consequent,support,confidence,cpir,kind";

std::string six(double x) { return fmt::format("{:.6f}", x); }

}  // namespace

std::string format_rules(const RuleSet& rules, RuleFormat format) {
  std::string out;
  if (format == RuleFormat::csv) {
    out += kCsvHeader;
    out += '\n';
  }
  if (rules.rules.empty()) return out;
  if (!rules.dictionary) throw Error("invalid-rules", "rule set has no item dictionary");
  const ItemDictionary& dict = *rules.dictionary;

  for (const auto& r : rules.rules) {
    if (format == RuleFormat::csv) {
      out += csv::join({dict.render(r.antecedent), dict.render(r.consequent), six(r.support), six(r.confidence),
                        six(r.cpir), std::string(to_string(r.kind))});
      out += '\n';
    } else {
      nlohmann::ordered_json j;
      auto antecedent = nlohmann::json::array();
      for (ItemId id : r.antecedent) antecedent.push_back(dict.render(id));
      j["antecedent"] = std::move(antecedent);
      j["consequent"] = dict.render(r.consequent);
      j["support"] = r.support;
      j["confidence"] = r.confidence;
      j["cpir"] = r.cpir;
      j["kind"] = to_string(r.kind);
      j["antecedent_count"] = r.antecedent_count;
      j["joint_count"] = r.joint_count;
      j["consequent_count"] = r.consequent_count;
      j["n_rows"] = rules.n_rows;
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

void export_rules(const RuleSet& rules, RuleFormat format, const std::string& path) {
  csv::write_file(path, format_rules(rules, format));
}

std::vector<RuleRecord> parse_rules_csv(const std::string& text) {
  const auto records = csv::parse(text);
  if (records.empty() || csv::join(records.front()) != kCsvHeader) {
    throw Error("parse", "rule file does not start with the rule CSV header");
  }
  std::vector<RuleRecord> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 6) throw Error("parse", fmt::format("rule row {} has {} fields", i, f.size()));
    RuleRecord r;
    std::string_view ante = f[0];
    while (!ante.empty()) {
      const auto sep = ante.find(" & ");
      r.antecedent.push_back(parse_rendered_item(ante.substr(0, sep)));
      if (sep == std::string_view::npos) break;
      ante.remove_prefix(sep + 3);
    }
    r.consequent = parse_rendered_item(f[1]);
    try {
      r.support = std::stod(f[2]);
      r.confidence = std::stod(f[3]);
      r.cpir = std::stod(f[4]);
    } catch (const std::exception&) {
      throw Error("parse", fmt::format("rule row {} has a non-numeric measure", i));
    }
    r.kind = rule_kind_from_string(f[5]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RuleRecord> read_rules_csv(const std::string& path) { return parse_rules_csv(csv::read_file(path)); }

}  // namespace armforge
