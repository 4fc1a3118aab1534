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

#include "armforge/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "armforge/csv.hpp"

namespace armforge {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string number_text(double v) { return fmt::format("{}", v); }

}  // namespace

// ---------------------------------------------------------------------------
// Schema

std::optional<std::string> AttributeSpec::label_for(std::string_view raw) const {
  raw = trim(raw);
  if (kind == AttributeKind::categorical) {
    for (const auto& [from, to] : categories) {
      if (from == raw) return to;
    }
    return std::nullopt;
  }
  const auto v = parse_number(raw);
  if (!v || bins.empty() || *v < bins.front().lower || *v > upper) return std::nullopt;
  std::size_t i = bins.size() - 1;
  while (i > 0 && *v < bins[i].lower) --i;
  return bins[i].label;
}

std::vector<std::string> AttributeSpec::labels() const {
  std::vector<std::string> out;
  auto add = [&out](const std::string& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  if (kind == AttributeKind::categorical) {
    for (const auto& c : categories) add(c.second);
  } else {
    for (const auto& b : bins) add(b.label);
  }
  return out;
}

void Schema::validate() const {
  std::set<std::string> names;
  std::set<std::string> sources;
  for (const auto& a : attributes) {
    if (a.name.empty()) throw Error("schema", "attribute with empty name");
    if (!names.insert(a.name).second) throw Error("schema", fmt::format("duplicate attribute '{}'", a.name));
    const std::string& src = a.source.empty() ? a.name : a.source;
    if (!sources.insert(src).second) throw Error("schema", fmt::format("column '{}' mapped twice", src));
    if (a.drop) continue;
    if (a.kind == AttributeKind::categorical) {
      if (a.categories.empty()) throw Error("schema", fmt::format("'{}' declares no categories", a.name));
    } else {
      if (a.bins.empty()) throw Error("schema", fmt::format("'{}' declares no bins", a.name));
      for (std::size_t i = 1; i < a.bins.size(); ++i) {
        if (!(a.bins[i - 1].lower < a.bins[i].lower)) {
          throw Error("schema", fmt::format("bins of '{}' are not strictly increasing", a.name));
        }
      }
      if (a.upper < a.bins.back().lower) {
        throw Error("schema", fmt::format("upper bound of '{}' is below its last bin", a.name));
      }
    }
  }
  const AttributeSpec* t = find(target);
  if (target.empty() || !t) throw Error("schema", fmt::format("target '{}' is not an attribute", target));
  if (t->drop) throw Error("schema", fmt::format("target '{}' is dropped", target));
}

const AttributeSpec* Schema::find(std::string_view attribute) const {
  for (const auto& a : attributes) {
    if (a.name == attribute) return &a;
  }
  return nullptr;
}

std::vector<const AttributeSpec*> Schema::retained() const {
  std::vector<const AttributeSpec*> out;
  for (const auto& a : attributes) {
    if (!a.drop) out.push_back(&a);
  }
  return out;
}

Schema Schema::labelled() const {
  Schema out;
  out.name = name;
  out.target = target;
  out.delimiter = ',';
  out.missing_tokens = {};
  for (const auto* a : retained()) {
    AttributeSpec spec;
    spec.name = a->name;
    spec.source = a->name;
    spec.kind = AttributeKind::categorical;
    spec.value_only = a->value_only;
    for (const auto& l : a->labels()) spec.categories.emplace_back(l, l);
    out.attributes.push_back(std::move(spec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Raw tables

RawTable parse_csv_table(std::string_view text, char delimiter) {
  if (delimiter == 0) {
    const auto header_line = text.substr(0, text.find('\n'));
    const auto semis = std::count(header_line.begin(), header_line.end(), ';');
    const auto commas = std::count(header_line.begin(), header_line.end(), ',');
    delimiter = semis > commas ? ';' : ',';
  }
  auto records = csv::parse(text, delimiter);
  // Blank lines.
  std::erase_if(records, [](const auto& r) { return r.size() == 1 && trim(r[0]).empty(); });
  if (records.empty()) throw Error("csv", "missing header row");

  RawTable out;
  for (const auto& h : records.front()) out.header.emplace_back(trim(h));
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != out.header.size()) {
      throw Error("csv", fmt::format("row {} has {} cells, header has {}", i, records[i].size(), out.header.size()));
    }
    out.rows.push_back(std::move(records[i]));
  }
  out.n_source_rows = out.rows.size();
  return out;
}

RawTable load_csv(const std::string& path, char delimiter) {
  try {
    return parse_csv_table(csv::read_file(path), delimiter);
  } catch (const Error& e) {
    if (e.code() == "io") throw;
    throw Error(e.code(), fmt::format("{}: {}", path, e.what()));
  }
}

RawTable merge_tables(const std::vector<RawTable>& tables) {
  if (tables.empty()) throw Error("csv", "nothing to merge");
  RawTable out;
  out.header = tables.front().header;
  for (const auto& t : tables) {
    if (t.header != out.header) throw Error("csv", "cannot merge tables with different headers");
    out.rows.insert(out.rows.end(), t.rows.begin(), t.rows.end());
    out.n_source_rows += t.n_source_rows;
  }
  return out;
}

std::string format_csv_table(const RawTable& table, char delimiter) {
  std::string out = csv::join(table.header, delimiter) + "\n";
  for (const auto& row : table.rows) out += csv::join(row, delimiter) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing

TransactionDb preprocess(const RawTable& raw, const Schema& schema) {
  schema.validate();

  // Every column is either mapped or explicitly dropped.
  for (const auto& column : raw.header) {
    const bool known = std::any_of(schema.attributes.begin(), schema.attributes.end(), [&](const AttributeSpec& a) {
      return (a.source.empty() ? a.name : a.source) == column;
    });
    if (!known) throw Error("schema", fmt::format("column '{}' is not covered by schema '{}'", column, schema.name));
  }
  const auto retained = schema.retained();
  std::vector<std::size_t> column_of;
  for (const auto* a : retained) {
    const std::string& src = a->source.empty() ? a->name : a->source;
    auto it = std::find(raw.header.begin(), raw.header.end(), src);
    if (it == raw.header.end()) throw Error("schema", fmt::format("column '{}' for '{}' not in input", src, a->name));
    column_of.push_back(static_cast<std::size_t>(it - raw.header.begin()));
  }

  auto is_missing = [&](std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return true;
    return std::find(schema.missing_tokens.begin(), schema.missing_tokens.end(), cell) != schema.missing_tokens.end();
  };

  TransactionDbBuilder builder;
  std::set<std::vector<std::string>> seen;
  std::vector<std::string> labels(retained.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    bool missing = false;
    for (std::size_t c = 0; c < retained.size() && !missing; ++c) missing = is_missing(row[column_of[c]]);
    if (missing) continue;

    for (std::size_t c = 0; c < retained.size(); ++c) {
      const std::string& cell = row[column_of[c]];
      auto label = retained[c]->label_for(cell);
      if (!label) {
        throw Error("value", fmt::format("attribute '{}', row {}: value '{}' is outside the declared {}",
                                         retained[c]->name, r + 1, trim(cell),
                                         retained[c]->kind == AttributeKind::numeric ? "bins" : "categories"));
      }
      labels[c] = std::move(*label);
    }
    if (!seen.insert(labels).second) continue;

    std::vector<std::pair<std::string, std::string>> cells;
    cells.reserve(retained.size());
    for (std::size_t c = 0; c < retained.size(); ++c) cells.emplace_back(retained[c]->name, labels[c]);
    builder.add_row(cells);
  }
  for (const auto* a : retained) {
    if (a->value_only) builder.set_value_only(a->name);
  }
  return std::move(builder).build(schema.target);
}

RawTable to_raw_table(const TransactionDb& db) {
  const auto& dict = db.dictionary();
  RawTable out;
  out.header = dict.attributes();
  for (const auto& t : db.transactions()) {
    std::vector<std::string> row(out.header.size());
    for (ItemId id : t) row[dict.attribute_index(id)] = dict.item(id).value;
    out.rows.push_back(std::move(row));
  }
  out.n_source_rows = out.rows.size();
  return out;
}

// ---------------------------------------------------------------------------
// Schema text format
//
//   # comment
//   [dataset]
//   name = dataset1
//   target = Final_grade
//   delimiter = auto            (auto | , | ; | tab)
//   missing = NA, ?
//
//   [attribute Sex]
//   source = sex
//   kind = categorical
//   categories = F:Female, M:Male
//
//   [attribute Age]
//   source = age
//   kind = numeric
//   bins = 15:<18, 18:>=18      (lower bound:label, ascending)
//   upper = 22
//
//   render = value              (print "Female" instead of "Sex=Female")
//
//   [attribute school]
//   drop = true

namespace {

char parse_delimiter(std::string_view v) {
  if (v == "auto") return 0;
  if (v == "tab") return '\t';
  if (v.size() == 1) return v[0];
  throw Error("schema", fmt::format("unsupported delimiter '{}'", v));
}

std::string delimiter_text(char d) {
  if (d == 0) return "auto";
  if (d == '\t') return "tab";
  return std::string(1, d);
}

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw Error("schema", fmt::format("line {}: expected true/false, got '{}'", line, v));
}

}  // namespace

Schema parse_schema(std::string_view text) {
  Schema schema;
  enum class Section { none, dataset, attribute } section = Section::none;
  AttributeSpec* current = nullptr;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto raw_line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw Error("schema", fmt::format("line {}: unterminated section", line_no));
      const auto header = trim(line.substr(1, line.size() - 2));
      if (header == "dataset") {
        section = Section::dataset;
        current = nullptr;
      } else if (header.starts_with("attribute ")) {
        section = Section::attribute;
        schema.attributes.emplace_back();
        current = &schema.attributes.back();
        current->name = std::string(trim(header.substr(10)));
        current->source = current->name;
      } else {
        throw Error("schema", fmt::format("line {}: unknown section '{}'", line_no, header));
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error("schema", fmt::format("line {}: expected key = value", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (section == Section::dataset) {
      if (key == "name") {
        schema.name = value;
      } else if (key == "target") {
        schema.target = value;
      } else if (key == "delimiter") {
        schema.delimiter = parse_delimiter(value);
      } else if (key == "missing") {
        schema.missing_tokens = value.empty() ? std::vector<std::string>{} : split(value, ',');
      } else {
        throw Error("schema", fmt::format("line {}: unknown dataset key '{}'", line_no, key));
      }
    } else if (section == Section::attribute) {
      if (key == "source") {
        current->source = value;
      } else if (key == "kind") {
        if (value == "categorical") {
          current->kind = AttributeKind::categorical;
        } else if (value == "numeric") {
          current->kind = AttributeKind::numeric;
        } else {
          throw Error("schema", fmt::format("line {}: unknown kind '{}'", line_no, value));
        }
      } else if (key == "categories") {
        current->categories.clear();
        for (const auto& entry : split(value, ',')) {
          const auto colon = entry.find(':');
          if (colon == std::string::npos) {
            current->categories.emplace_back(entry, entry);
          } else {
            current->categories.emplace_back(std::string(trim(std::string_view(entry).substr(0, colon))),
                                             std::string(trim(std::string_view(entry).substr(colon + 1))));
          }
        }
      } else if (key == "bins") {
        current->bins.clear();
        for (const auto& entry : split(value, ',')) {
          const auto colon = entry.find(':');
          const auto lower = colon == std::string::npos ? std::nullopt : parse_number(entry.substr(0, colon));
          if (!lower) throw Error("schema", fmt::format("line {}: malformed bin '{}'", line_no, entry));
          current->bins.push_back({*lower, std::string(trim(std::string_view(entry).substr(colon + 1)))});
        }
      } else if (key == "upper") {
        const auto v = parse_number(value);
        if (!v) throw Error("schema", fmt::format("line {}: malformed upper bound '{}'", line_no, value));
        current->upper = *v;
      } else if (key == "render") {
        if (value != "value" && value != "item") {
          throw Error("schema", fmt::format("line {}: render must be 'value' or 'item'", line_no));
        }
        current->value_only = value == "value";
      } else if (key == "drop") {
        current->drop = parse_bool(value, line_no);
      } else {
        throw Error("schema", fmt::format("line {}: unknown attribute key '{}'", line_no, key));
      }
    } else {
      throw Error("schema", fmt::format("line {}: key outside any section", line_no));
    }
  }
  schema.validate();
  return schema;
}

Schema load_schema(const std::string& path) { return parse_schema(csv::read_file(path)); }

std::string format_schema(const Schema& schema) {
  std::string out = "[dataset]\n";
  out += fmt::format("name = {}\ntarget = {}\ndelimiter = {}\n", schema.name, schema.target,
                     delimiter_text(schema.delimiter));
  out += "missing = ";
  for (std::size_t i = 0; i < schema.missing_tokens.size(); ++i) {
    out += (i ? ", " : "") + schema.missing_tokens[i];
  }
  out += "\n";
  for (const auto& a : schema.attributes) {
    out += fmt::format("\n[attribute {}]\nsource = {}\n", a.name, a.source.empty() ? a.name : a.source);
    if (a.drop) {
      out += "drop = true\n";
      continue;
    }
    if (a.value_only) out += "render = value\n";
    if (a.kind == AttributeKind::categorical) {
      out += "kind = categorical\ncategories = ";
      for (std::size_t i = 0; i < a.categories.size(); ++i) {
        out += fmt::format("{}{}:{}", i ? ", " : "", a.categories[i].first, a.categories[i].second);
      }
      out += "\n";
    } else {
      out += "kind = numeric\nbins = ";
      for (std::size_t i = 0; i < a.bins.size(); ++i) {
        out += fmt::format("{}{}:{}", i ? ", " : "", number_text(a.bins[i].lower), a.bins[i].label);
      }
      out += fmt::format("\nupper = {}\n", number_text(a.upper));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in schemas (text embedded at build time from data/schemas/)

namespace builtin {
extern const char* const kDataset1Schema;
extern const char* const kDataset2Schema;
}  // namespace builtin

std::string_view builtin_schema_text(BuiltinDataset dataset) {
  return dataset == BuiltinDataset::dataset1 ? builtin::kDataset1Schema : builtin::kDataset2Schema;
}

Schema builtin_schema(BuiltinDataset dataset) { return parse_schema(builtin_schema_text(dataset)); }

Schema builtin_schema(std::string_view tag) {
  if (tag.starts_with("builtin:")) tag.remove_prefix(8);
  if (tag == "dataset1") return builtin_schema(BuiltinDataset::dataset1);
  if (tag == "dataset2") return builtin_schema(BuiltinDataset::dataset2);
  throw Error("unknown-dataset", fmt::format("no built-in schema named '{}'", tag));
}

}  // namespace armforge
