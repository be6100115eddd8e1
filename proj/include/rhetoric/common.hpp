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

#ifndef RHETORIC_COMMON_HPP_
#define RHETORIC_COMMON_HPP_

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rhetoric {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message names the offending line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Transient failure (connection refused, timeout). Safe to retry.
class RetryableError : public Error {
 public:
  using Error::Error;
};

// A peer answered with something that violates the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

enum class Genre { kDebate, kSotu, kCampaign };
enum class Party { kDemocrat, kRepublican, kOther };

std::string_view to_string(Genre g);
std::string_view to_string(Party p);
// Single-letter wire code: "D", "R", "O".
std::string_view party_code(Party p);

Genre parse_genre(std::string_view s);
Party parse_party(std::string_view s);

using Date = std::chrono::year_month_day;

// Strict "YYYY-MM-DD".
Date parse_date(std::string_view s);
std::string format_date(const Date& d);
int year_of(const Date& d);

// Presidential election year a date belongs to (the next year divisible by 4,
// inclusive).
int election_cycle_of(const Date& d);

// Small string helpers shared by the text modules.
std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Deterministic 64-bit FNV-1a; used for config hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace rhetoric

#endif  // RHETORIC_COMMON_HPP_
