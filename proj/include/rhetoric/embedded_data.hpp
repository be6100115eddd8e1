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

#ifndef RHETORIC_EMBEDDED_DATA_HPP_
#define RHETORIC_EMBEDDED_DATA_HPP_

#include <string_view>

// Bundled data files compiled into the library.
namespace rhetoric::data {

std::string_view contractions();
std::string_view abbreviations();
std::string_view audience_stoplist();
std::string_view divisive_lexicon();
std::string_view dale_chall_easy_words();
std::string_view syllable_exceptions();

}  // namespace rhetoric::data

#endif  // RHETORIC_EMBEDDED_DATA_HPP_
