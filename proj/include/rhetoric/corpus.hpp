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

#ifndef RHETORIC_CORPUS_HPP_
#define RHETORIC_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rhetoric/common.hpp"

namespace rhetoric {

inline constexpr std::string_view kMaskToken = "<ENT>";

struct Speaker {
  std::string id;
  std::string display_name;
  Party party = Party::kOther;
  bool is_pool_member = false;

  bool operator==(const Speaker&) const = default;
};

struct Document {
  std::string id;
  Genre genre = Genre::kDebate;
  std::optional<Date> date;
  std::string title;
  std::optional<int> election_cycle;
  std::optional<int> term_index;

  bool operator==(const Document&) const = default;
};

enum class MentionLabel { kNone, kPossible, kDefinite };

std::string_view to_string(MentionLabel m);
MentionLabel parse_mention_label(std::string_view s);

struct Sentence {
  std::string id;
  std::string doc_id;
  std::string speaker_id;
  int seq = 0;
  std::string raw_text;
  std::string normalized_text;
  std::string masked_text;
  std::size_t char_len = 0;
  std::size_t word_count = 0;
  // One tag per token of normalized_text when present.
  std::vector<std::string> pos_tags;
  MentionLabel mention_label = MentionLabel::kNone;

  bool operator==(const Sentence&) const = default;
};

// Immutable once built; the add_* methods validate references as they go.
class Corpus {
 public:
  explicit Corpus(Genre genre = Genre::kDebate) : genre_(genre) {}

  Genre genre() const { return genre_; }

  void add_speaker(Speaker s);
  void add_document(Document d);
  // Appends a sentence; its doc and speaker must already exist and its seq
  // must be greater than the previous sentence of the same document.
  void add_sentence(Sentence s);
  void set_mention_label(std::size_t sentence_index, MentionLabel label);

  const std::vector<Speaker>& speakers() const { return speakers_; }
  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }

  const Speaker* find_speaker(std::string_view id) const;
  const Speaker& speaker(std::string_view id) const;
  const Document& document(std::string_view id) const;
  // Indices into sentences(), in seq order.
  const std::vector<std::size_t>& document_sentences(std::string_view doc_id) const;
  std::optional<std::size_t> sentence_index(std::string_view sentence_id) const;

  std::vector<std::string> pool_speakers() const;

  bool operator==(const Corpus& other) const;

 private:
  Genre genre_;
  std::vector<Speaker> speakers_;
  std::vector<Document> documents_;
  std::vector<Sentence> sentences_;
  std::unordered_map<std::string, std::size_t> speaker_index_;
  std::unordered_map<std::string, std::size_t> document_index_;
  std::unordered_map<std::string, std::size_t> sentence_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> doc_sentences_;
};

struct SpeakerStats {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t chars = 0;

  double mean_words() const {
    return sentences ? static_cast<double>(words) / static_cast<double>(sentences) : 0.0;
  }
  double mean_chars() const {
    return sentences ? static_cast<double>(chars) / static_cast<double>(sentences) : 0.0;
  }
  bool operator==(const SpeakerStats&) const = default;
};

struct IngestReport {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t records = 0;
  std::size_t dropped_annotations = 0;
  std::size_t dropped_empty = 0;
  std::map<std::string, SpeakerStats> per_speaker;
};

IngestReport summarize(const Corpus& corpus);

// Character spans are byte offsets into UTF-8 text, half-open.
struct EntitySpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class EntityProvider {
 public:
  virtual ~EntityProvider() = default;
  virtual std::vector<EntitySpan> find(std::string_view text) const = 0;
};

// Fallback tagger: maximal runs of capitalized tokens that do not start the
// sentence. "I" and its contractions are never entities; known abbreviations
// ("Mr.", "U.S.") continue a run through their period.
class CapitalizedRunTagger final : public EntityProvider {
 public:
  std::vector<EntitySpan> find(std::string_view text) const override;
};

struct IngestOptions {
  // Parenthesized or bracketed annotations whose lowercased content matches
  // are removed. Defaults to the bundled list.
  std::optional<std::vector<std::string>> audience_stoplist;
  // Explicit pool. When absent, every Democrat or Republican speaker is a
  // pool member.
  std::optional<std::vector<std::string>> pool;
  // Entity tagger for masked_text; nullptr selects CapitalizedRunTagger.
  std::shared_ptr<const EntityProvider> ner;
};

struct IngestResult {
  Corpus corpus;
  IngestReport report;
  // Value of the "_meta" header line, if the file carried one (raw JSON).
  std::optional<std::string> meta;
};

IngestResult ingest(std::istream& in, Genre genre, const IngestOptions& options = {});
IngestResult ingest(const std::filesystem::path& path, Genre genre,
                    const IngestOptions& options = {});

// Writes one JSONL record per sentence, re-ingestable by ingest(). A nonempty
// meta_json is written first as {"_meta": meta_json}.
void emit(const Corpus& corpus, std::ostream& out, std::string_view meta_json = {});

std::vector<std::string> segment(std::string_view text);

class ContractionTable {
 public:
  static const ContractionTable& bundled();
  static ContractionTable parse(std::string_view tsv);

  // token must be lowercase with surrounding punctuation removed.
  std::optional<std::string> expand(std::string_view token) const;

 private:
  std::unordered_map<std::string, std::string> exact_;
  std::vector<std::pair<std::string, std::string>> suffixes_;
};

std::string normalize(std::string_view text);
std::string normalize(std::string_view text, const ContractionTable& table);

std::string mask_entities(std::string_view text, const EntityProvider& ner);
std::string mask_spans(std::string_view text, std::vector<EntitySpan> spans);

// Removes audience annotations such as "(Laughter)" or "[APPLAUSE]".
std::string strip_audience_annotations(std::string_view text,
                                       const std::vector<std::string>& stoplist,
                                       std::size_t* removed = nullptr);
std::vector<std::string> bundled_audience_stoplist();

// Tuesday after the first Monday in November.
Date us_election_day(int year);

Corpus filter_campaign_window(const Corpus& corpus, const Date& election_day,
                              int window_days, int min_cycle_year);
// Per-cycle election days; documents whose cycle has no entry are dropped.
Corpus filter_campaign_window(const Corpus& corpus,
                              const std::map<int, Date>& election_days,
                              int window_days, int min_cycle_year);

}  // namespace rhetoric

#endif  // RHETORIC_CORPUS_HPP_
