// Copyright 2026 The Rhetoric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RHETORIC_CSV_HPP_
#define RHETORIC_CSV_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rhetoric::csv {

// RFC 4180 quoting: fields containing a comma, quote or newline are quoted.
std::string escape(std::string_view field);
std::string row(const std::vector<std::string>& fields);

// Splits one physical line. Quoted fields may contain commas and doubled
// quotes but not newlines.
std::vector<std::string> parse_line(std::string_view line);

// Reads all nonblank lines; the first is returned as the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};
Table read(std::istream& in);

// Fixed formatting so report files are byte-stable.
std::string num(double v);

}  // namespace rhetoric::csv

#endif  // RHETORIC_CSV_HPP_
