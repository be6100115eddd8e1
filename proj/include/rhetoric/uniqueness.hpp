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

#ifndef RHETORIC_UNIQUENESS_HPP_
#define RHETORIC_UNIQUENESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rhetoric/corpus.hpp"
#include "rhetoric/lm.hpp"

namespace rhetoric {

struct UniquenessRecord {
  std::string sentence_id;
  std::string speaker_id;
  double bpc_original = 0.0;
  std::map<std::string, double> bpc_alternates;
  // mean(bpc_alternates) - bpc_original
  double sent_uniq = 0.0;

  bool operator==(const UniquenessRecord&) const = default;
};

// Builds a record, computing sent_uniq from the BPC values.
UniquenessRecord make_record(std::string sentence_id, std::string speaker_id,
                             double bpc_original, std::map<std::string, double> bpc_alternates);

// Which speakers substitute for the original one. In debates the speakers
// of a document exclude each other for that document's sentences.
struct PoolPolicy {
  std::vector<std::string> pool;
  std::map<std::string, std::set<std::string>> exclusions;  // doc id -> speakers

  // Explicit pool; for debate corpora every pool speaker appearing in a
  // document is excluded for that document.
  static PoolPolicy for_corpus(const Corpus& corpus, std::vector<std::string> pool);

  bool contains(std::string_view speaker) const;
  // Sorted alternates for a sentence of `original` in `doc_id`.
  std::vector<std::string> alternates(std::string_view doc_id, std::string_view original) const;
};

struct ScoringOptions {
  int window_tokens = kDefaultWindowTokens;
  int workers = 1;
};

UniquenessRecord sent_uniq(const Corpus& corpus, std::size_t sentence_index,
                           const LossBackend& backend, const PoolPolicy& policy,
                           const ScoringOptions& options = {});

// Scores every sentence spoken by a pool member, fanning requests out over
// `options.workers` threads. Output order follows the corpus.
std::vector<UniquenessRecord> score_corpus(const Corpus& corpus, const LossBackend& backend,
                                           const PoolPolicy& policy,
                                           const ScoringOptions& options = {});

double speaker_uniq(std::span<const UniquenessRecord> records, std::string_view speaker);

enum class Dimension { kSpeaker, kParty, kLengthBin, kYear, kTerm, kDecile, kMention };
enum class Metric { kSentUniq, kBpcOriginal };
enum class CiMethod { kNormal, kBootstrap };

struct AggregateOptions {
  // Reported as its own group by the party dimension.
  std::string focus_speaker = "Donald Trump";
  Metric metric = Metric::kSentUniq;
  CiMethod ci = CiMethod::kNormal;
  int bootstrap_samples = 1000;
  std::uint64_t seed = 0;
  int length_bin_width = 5;
  int length_max = 50;
};

struct GroupStat {
  std::string group;  // dimension labels joined by '|'
  std::size_t n = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// mean +/- 1.96 * sd / sqrt(n) with the sample standard deviation.
Interval normal_ci(const Eigen::Ref<const Eigen::VectorXd>& values);
// Percentile bootstrap of the mean.
Interval bootstrap_ci(const Eigen::Ref<const Eigen::VectorXd>& values, int samples,
                      std::uint64_t seed);

// Top ceil(10%) of values, descending.
std::vector<double> top_decile(std::vector<double> values);

std::string party_group(const Corpus& corpus, std::string_view speaker,
                        std::string_view focus_speaker);

std::vector<GroupStat> aggregate(std::span<const UniquenessRecord> records, const Corpus& corpus,
                                 std::span<const Dimension> dims,
                                 const AggregateOptions& options = {});

// JSONL, one record per line; a nonempty meta is written first as
// {"_meta": ...}.
void write_records(std::ostream& out, std::span<const UniquenessRecord> records,
                   std::string_view meta_json = {});

struct RecordFile {
  std::vector<UniquenessRecord> records;
  std::optional<std::string> meta;
};
RecordFile read_records(std::istream& in);

}  // namespace rhetoric

#endif  // RHETORIC_UNIQUENESS_HPP_
