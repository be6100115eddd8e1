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

#ifndef RHETORIC_SRC_TEXT_UTIL_HPP_
#define RHETORIC_SRC_TEXT_UTIL_HPP_

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace rhetoric::text {

struct Token {
  std::size_t begin;
  std::size_t end;
};

// Length of a recognised multi-byte punctuation code point at i, else 0.
std::size_t utf8_punct_len(std::string_view s, std::size_t i);
bool is_ascii_punct(char c);
std::size_t punct_len(std::string_view s, std::size_t i);
std::size_t utf8_length(std::string_view s);
std::vector<Token> tokenize_with_offsets(std::string_view s);
// [begin, end) of a token with leading and trailing punctuation removed.
std::pair<std::size_t, std::size_t> core_bounds(std::string_view tok);

}  // namespace rhetoric::text

#endif  // RHETORIC_SRC_TEXT_UTIL_HPP_
