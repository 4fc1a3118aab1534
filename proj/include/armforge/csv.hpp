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

#ifndef ARMFORGE_CSV_HPP_
#define ARMFORGE_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace armforge::csv {

// RFC 4180 records: quoted fields may hold the delimiter, doubled quotes and
// line breaks. Accepts LF and CRLF; a trailing newline does not produce an
// empty record. Throws Error("csv") on an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text, char delimiter = ',');

// Quotes the field when it holds the delimiter, a quote or a line break.
std::string escape(std::string_view field, char delimiter = ',');

std::string join(const std::vector<std::string>& fields, char delimiter = ',');

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace armforge::csv

#endif  // ARMFORGE_CSV_HPP_
