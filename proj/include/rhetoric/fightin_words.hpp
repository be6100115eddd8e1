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

#ifndef RHETORIC_FIGHTIN_WORDS_HPP_
#define RHETORIC_FIGHTIN_WORDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rhetoric/corpus.hpp"
#include "rhetoric/opponent_tagging.hpp"

namespace rhetoric {

using TokenCounts = std::map<std::string, std::int64_t>;

// Log-odds z-scores of corpus a against corpus b with an informative
// Dirichlet prior: alpha_w = prior_scale * prior_w / sum(prior). Positive z
// means the word leans toward a.
std::map<std::string, double> fw_zscores(const TokenCounts& a, const TokenCounts& b,
                                         const TokenCounts& prior, double prior_scale);

enum class FwSide { kY, kN };
std::string_view to_string(FwSide side);

// POS predicate over a sentence's tags. An empty tag set keeps every token.
struct TokenFilter {
  std::string name = "adjectives";
  std::set<std::string> tags = {"ADJ", "JJ", "JJR", "JJS"};

  static TokenFilter all_tokens() { return {"all", {}}; }
  bool keep(std::string_view tag) const { return tags.empty() || tags.count(std::string(tag)); }
};

struct FwResult {
  std::string speaker;
  FwSide side = FwSide::kY;
  // Y (mention) sentences against N sentences; shared by both sides.
  std::map<std::string, double> z;
  std::string token_filter;
};

struct FwOptions {
  double prior_scale = 500.0;
  TokenFilter filter;
  MentionPolicy mention;
  int workers = 1;
};

// Filtered token counts over the given sentences. Throws when a sentence with
// words has no pos_tags and the filter needs them.
TokenCounts filtered_counts(const Corpus& corpus, const std::vector<std::size_t>& sentences,
                            const TokenFilter& filter);

// Results for each speaker in `speakers`, Y then N, in the order given. The
// prior is the filtered pool of all those speakers' sentences.
std::vector<FwResult> fw_for_speakers(const Corpus& corpus,
                                      const std::vector<std::string>& speakers,
                                      const FwOptions& options = {});

struct TopWords {
  std::vector<std::string> words;
  // Set when fewer than n words were available.
  bool truncated = false;
};

// Y: most positive z first. N: most negative first. Ties lexicographic.
TopWords top_n(const FwResult& result, int n);

// Bipartite speakers-words graph; (s, w) is an edge iff w is in s's top set.
class FwOverlapGraph {
 public:
  explicit FwOverlapGraph(std::map<std::string, std::vector<std::string>> topsets);

  int degree(std::string_view word) const;
  // Mean degree over the speaker's top words.
  double overlap(std::string_view speaker) const;
  std::size_t speaker_count() const { return topsets_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> topsets_;
  std::map<std::string, int, std::less<>> degree_;
};

double overlap_metric(const std::map<std::string, std::vector<std::string>>& topsets,
                      std::string_view speaker);

struct OverlapRow {
  std::string speaker;
  FwSide side = FwSide::kY;
  int n = 0;
  double score = 0.0;
};

// One row per speaker and side, computed from top-n sets at that side.
std::vector<OverlapRow> overlap_report(const std::vector<FwResult>& results, int n);

// "speaker,side,word,zscore" for each result's top n, in rank order.
void write_fw_csv(std::ostream& out, const std::vector<FwResult>& results, int n);
// "speaker,side,n,score".
void write_overlap_csv(std::ostream& out, const std::vector<OverlapRow>& rows);

}  // namespace rhetoric

#endif  // RHETORIC_FIGHTIN_WORDS_HPP_
