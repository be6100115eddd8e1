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

#include "rhetoric/common.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace rhetoric {

std::string_view to_string(Genre g) {
  switch (g) {
    case Genre::kDebate:
      return "debate";
    case Genre::kSotu:
      return "sotu";
    case Genre::kCampaign:
      return "campaign";
  }
  return "?";
}

std::string_view to_string(Party p) {
  switch (p) {
    case Party::kDemocrat:
      return "Democrat";
    case Party::kRepublican:
      return "Republican";
    case Party::kOther:
      return "Other";
  }
  return "?";
}

std::string_view party_code(Party p) {
  switch (p) {
    case Party::kDemocrat:
      return "D";
    case Party::kRepublican:
      return "R";
    case Party::kOther:
      return "O";
  }
  return "O";
}

Genre parse_genre(std::string_view s) {
  if (s == "debate" || s == "debates") return Genre::kDebate;
  if (s == "sotu") return Genre::kSotu;
  if (s == "campaign") return Genre::kCampaign;
  throw Error(fmt::format("unknown genre '{}'", s));
}

Party parse_party(std::string_view s) {
  if (s == "D" || s == "Democrat") return Party::kDemocrat;
  if (s == "R" || s == "Republican") return Party::kRepublican;
  if (s == "O" || s == "Other") return Party::kOther;
  throw Error(fmt::format("unknown party '{}'", s));
}

namespace {

int parse_fixed_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(fmt::format("bad number '{}'", s));
  }
  return v;
}

}  // namespace

Date parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw Error(fmt::format("bad date '{}', expected YYYY-MM-DD", s));
  }
  const int y = parse_fixed_int(s.substr(0, 4));
  const int m = parse_fixed_int(s.substr(5, 2));
  const int d = parse_fixed_int(s.substr(8, 2));
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw Error(fmt::format("invalid calendar date '{}'", s));
  return date;
}

std::string format_date(const Date& d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()),
                     static_cast<unsigned>(d.day()));
}

int year_of(const Date& d) { return static_cast<int>(d.year()); }

int election_cycle_of(const Date& d) {
  const int y = year_of(d);
  return y + ((4 - y % 4) % 4);
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == delim) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

}  // namespace rhetoric
