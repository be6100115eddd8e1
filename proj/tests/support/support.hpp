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

#ifndef RHETORIC_TESTS_SUPPORT_HPP_
#define RHETORIC_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rhetoric/corpus.hpp"

namespace rhetoric::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(RHETORIC_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::path(RHETORIC_SCRATCH_DIR) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline Corpus corpus_from_jsonl(const std::string& jsonl, Genre genre,
                                const IngestOptions& options = {}) {
  std::istringstream in(jsonl);
  return ingest(in, genre, options).corpus;
}

}  // namespace rhetoric::testing

#endif  // RHETORIC_TESTS_SUPPORT_HPP_
