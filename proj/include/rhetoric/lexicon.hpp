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

#ifndef RHETORIC_LEXICON_HPP_
#define RHETORIC_LEXICON_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rhetoric/corpus.hpp"

namespace rhetoric {

// Word vectors, one row per vocabulary term.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> vocabulary, Eigen::MatrixXd vectors);

  // Plain text, one "term v1 ... vd" per line.
  static EmbeddingTable parse(std::istream& in);
  static EmbeddingTable load(const std::filesystem::path& path);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  Eigen::Index dimension() const { return vectors_.cols(); }
  std::optional<Eigen::Index> index(std::string_view term) const;

 private:
  std::vector<std::string> vocabulary_;
  Eigen::MatrixXd vectors_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

enum class SeedAggregation { kMax, kMean };

struct SeedCandidate {
  std::string term;
  double similarity = 0.0;
};

// The k non-seed terms most similar to the seeds, by cosine similarity
// aggregated over seeds (max by default). Ties break lexicographically.
std::vector<SeedCandidate> expand_seeds(const std::vector<std::string>& seeds,
                                        const EmbeddingTable& emb, int k,
                                        SeedAggregation agg = SeedAggregation::kMax);

// Curated set of lowercase single-token terms.
class Lexicon {
 public:
  Lexicon() = default;

  // One term per line; a trailing "*" marks a seed. Blank lines and lines
  // starting with '#' are skipped.
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);
  static const Lexicon& bundled();

  void add(std::string term, bool seed = false, std::optional<int> yes_votes = std::nullopt);

  std::size_t size() const { return terms_.size(); }
  bool contains(std::string_view term) const { return terms_.count(std::string(term)) > 0; }
  const std::set<std::string>& terms() const { return terms_; }
  const std::set<std::string>& seeds() const { return seeds_; }
  const std::map<std::string, int>& votes() const { return votes_; }

  void write(std::ostream& out) const;

 private:
  std::set<std::string> terms_;
  std::set<std::string> seeds_;
  std::map<std::string, int> votes_;
};

// items x raters binary labels (1 = divisive).
struct AnnotationMatrix {
  std::vector<std::string> items;
  std::vector<std::string> raters;
  Eigen::MatrixXi labels;

  // CSV with header "term,<rater>,<rater>,..." and one row per item.
  static AnnotationMatrix parse(std::istream& in);
  static AnnotationMatrix load(const std::filesystem::path& path);
};

// Items labeled divisive by strictly more than half of the raters.
Lexicon aggregate_votes(const AnnotationMatrix& m, const std::set<std::string>& seeds = {});

struct MajorityClassRow {
  int size = 0;
  double percent = 0.0;
};

// Share of items whose majority class has each size, from r down to ceil(r/2).
std::vector<MajorityClassRow> majority_class_table(const AnnotationMatrix& m);

struct FleissKappa {
  double kappa = 0.0;
  double observed = 0.0;  // mean per-item agreement
  double expected = 0.0;  // chance agreement
  // Every label identical; kappa is reported as 1.
  bool degenerate = false;
};

FleissKappa fleiss_kappa(const AnnotationMatrix& m);

enum class DivisiveGroup { kSpeaker, kYear, kTerm };

struct DivisiveFrequencyRow {
  std::string group;
  std::size_t matches = 0;
  std::size_t total_words = 0;
  double frequency = 0.0;
};

// Lexicon hits over pool-member sentences, counted on normalized tokens.
std::vector<DivisiveFrequencyRow> divisive_frequency(const Corpus& corpus, const Lexicon& lex,
                                                     DivisiveGroup group_by);

struct HeatmapCell {
  std::string speaker;
  std::string term;
  std::size_t count = 0;
  double frequency = 0.0;  // count over the speaker's total words
};

std::vector<HeatmapCell> divisive_heatmap(const Corpus& corpus, const Lexicon& lex);

std::vector<std::pair<std::string, std::size_t>> top_divisive_terms(const Corpus& corpus,
                                                                    const Lexicon& lex,
                                                                    std::string_view speaker,
                                                                    int n);

std::size_t count_divisive(std::string_view normalized_text, const Lexicon& lex);

}  // namespace rhetoric

#endif  // RHETORIC_LEXICON_HPP_
