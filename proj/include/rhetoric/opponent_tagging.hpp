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

#ifndef RHETORIC_OPPONENT_TAGGING_HPP_
#define RHETORIC_OPPONENT_TAGGING_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rhetoric/corpus.hpp"

namespace rhetoric {

// Patterns for one pool speaker. `names` identify the speaker when someone
// else mentions them (used for debate partners); `opponents` are extra
// patterns that count as an opponent mention when this speaker says them.
struct SpeakerRules {
  std::vector<std::string> names;
  std::vector<std::string> opponents;
};

// Loaded from JSON:
//   {"genre": "debate",
//    "party_keywords": {"D": [...], "R": [...]},
//    "possible_triggers": ["you", ...],
//    "unresolved_surnames": [...],
//    "speakers": {"<speaker id>": {"names": [...], "opponents": [...]}}}
// All patterns match case-insensitively on whole words; multi-word patterns
// match contiguous words.
struct MentionRuleSet {
  Genre genre = Genre::kDebate;
  std::map<std::string, SpeakerRules> speakers;
  std::map<Party, std::vector<std::string>> party_keywords;
  std::vector<std::string> possible_triggers;
  std::vector<std::string> unresolved_surnames;

  static MentionRuleSet from_json(std::string_view text);
  static MentionRuleSet load(const std::filesystem::path& path);
};

// Lowercased alphanumeric word runs; apostrophes split words so "Clinton's"
// yields "clinton" and "s".
std::vector<std::string> mention_words(std::string_view text);

MentionLabel classify_mention(std::string_view text,
                              const std::vector<std::string>& opponent_patterns,
                              const std::vector<std::string>& possible_patterns);

// Opponent patterns that apply to `speaker_id` inside `doc_id`.
std::vector<std::string> opponent_patterns(const Corpus& corpus, const MentionRuleSet& rules,
                                           std::string_view doc_id,
                                           std::string_view speaker_id);

// Labels every pool-member sentence; other speakers (moderators, audience)
// are labeled none.
Corpus tag_mentions(const Corpus& corpus, const MentionRuleSet& rules);

struct MentionPolicy {
  // Count `possible` sentences as mentions.
  bool include_possible = false;
  // Sentence ids confirmed as mentions by manual review.
  std::set<std::string> confirmed;
};

enum class MentionGroup { kSpeaker, kGenre };

struct MentionRateRow {
  std::string group;
  std::size_t mentions = 0;
  std::size_t total = 0;
  double rate = 0.0;
};

// Rates over pool-member sentences. Groups without sentences are absent.
std::vector<MentionRateRow> mention_rate(const Corpus& corpus, MentionGroup group_by,
                                         const MentionPolicy& policy = {});

bool counts_as_mention(const Sentence& s, const MentionPolicy& policy);

struct ReviewRow {
  std::string sentence_id;
  std::string rater_id;
  bool yes = false;
};

// CSV "sentence_id,rater_id,label" with label in {yes, no}.
class ReviewFile {
 public:
  ReviewFile() = default;
  explicit ReviewFile(std::vector<ReviewRow> rows);

  static ReviewFile parse(std::istream& in);
  static ReviewFile load(const std::filesystem::path& path);

  const std::vector<ReviewRow>& rows() const { return rows_; }
  // Sentences a strict majority of their raters labeled yes.
  std::set<std::string> confirmed() const;

 private:
  std::vector<ReviewRow> rows_;
};

// Two-rater agreement over the items both raters labeled.
double cohen_kappa(const ReviewFile& file, std::string_view rater_a, std::string_view rater_b);

// Queue of `possible` sentences for manual review: "sentence_id,speaker,text".
void write_review_queue(const Corpus& corpus, std::ostream& out);

}  // namespace rhetoric

#endif  // RHETORIC_OPPONENT_TAGGING_HPP_
