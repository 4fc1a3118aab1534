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

#ifndef ARMFORGE_INGEST_HPP_
#define ARMFORGE_INGEST_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "armforge/core.hpp"

namespace armforge {

enum class AttributeKind { categorical, numeric };

// Numeric bin [lower, next bin's lower); the last bin is closed at the
// attribute's upper bound.
struct Bin {
  double lower = 0.0;
  std::string label;
};

struct AttributeSpec {
  // Item attribute name used in rules.
  std::string name;
  // Source column; defaults to name.
  std::string source;
  AttributeKind kind = AttributeKind::categorical;
  // Raw cell -> label. Several raw values may share a label.
  std::vector<std::pair<std::string, std::string>> categories;
  std::vector<Bin> bins;
  double upper = 0.0;
  bool drop = false;
  // Render items as the bare label ("Male") instead of "Sex=Male".
  bool value_only = false;

  // Label of a raw (trimmed, non-missing) cell; nullopt when the value is
  // outside the declared categories or bins.
  std::optional<std::string> label_for(std::string_view raw) const;
  // Labels in declaration order, without repeats.
  std::vector<std::string> labels() const;
};

struct Schema {
  std::string name;
  std::vector<AttributeSpec> attributes;
  std::string target;
  // 0 picks ';' or ',' from the header line.
  char delimiter = 0;
  // Cells equal to one of these (after trimming) count as missing, as do
  // empty cells.
  std::vector<std::string> missing_tokens{"NA", "?"};

  void validate() const;
  const AttributeSpec* find(std::string_view name) const;
  std::vector<const AttributeSpec*> retained() const;
  // Schema that reads preprocess output back: one categorical attribute per
  // retained attribute, label -> label, sources renamed to the item names.
  Schema labelled() const;
};

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t n_source_rows = 0;
};

RawTable parse_csv_table(std::string_view text, char delimiter = 0);
RawTable load_csv(const std::string& path, char delimiter = 0);
// Row union of tables with identical headers.
RawTable merge_tables(const std::vector<RawTable>& tables);
std::string format_csv_table(const RawTable& table, char delimiter = ',');

// Drops rows with missing cells, maps every retained cell to its label,
// removes duplicate rows (judged on the labels) and encodes the result.
TransactionDb preprocess(const RawTable& raw, const Schema& schema);

// Inverse view of a database: one column per attribute, one row per
// transaction, cells holding item values.
RawTable to_raw_table(const TransactionDb& db);

enum class BuiltinDataset { dataset1, dataset2 };

Schema builtin_schema(BuiltinDataset dataset);
// Accepts "dataset1" / "dataset2", optionally prefixed with "builtin:".
Schema builtin_schema(std::string_view tag);
std::string_view builtin_schema_text(BuiltinDataset dataset);

Schema parse_schema(std::string_view text);
Schema load_schema(const std::string& path);
std::string format_schema(const Schema& schema);

}  // namespace armforge

#endif  // ARMFORGE_INGEST_HPP_
