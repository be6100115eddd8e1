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

#ifndef RHETORIC_ANALYSIS_HPP_
#define RHETORIC_ANALYSIS_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhetoric/corpus.hpp"
#include "rhetoric/lexicon.hpp"
#include "rhetoric/opponent_tagging.hpp"
#include "rhetoric/uniqueness.hpp"

namespace rhetoric {

// Vowel-group count with a silent-e rule; the bundled exception list wins.
// Words without letters count as one syllable.
int count_syllables(std::string_view word);

struct ReadabilityScores {
  double fkgl = 0.0;
  double fog = 0.0;
  double dale_chall = 0.0;
  double ari = 0.0;
};

// Scores one sentence (sentences = 1) from its whitespace tokens. Throws on
// text without words.
ReadabilityScores readability(std::string_view normalized_text);
ReadabilityScores readability(const Sentence& s);

struct Spearman {
  double rho = 0.0;
  // Two-sided, from the t approximation with n - 2 degrees of freedom.
  double p = 0.0;
  // False when either input is constant; rho and p are NaN then.
  bool defined = true;
};

// Average ranks for ties (1-based).
std::vector<double> average_ranks(std::span<const double> v);
Spearman spearman(std::span<const double> x, std::span<const double> y);

struct RelationRow {
  std::string stratum;  // "divisive" or "mention"
  std::string group;    // "yes" or "no"
  std::size_t n = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct CorrelationRow {
  std::string x;
  std::string y;
  std::size_t n = 0;
  Spearman result;
};

struct MetricRelations {
  std::vector<RelationRow> groups;
  // Mean(yes) - mean(no) per stratum with both groups present.
  std::vector<std::pair<std::string, double>> gaps;
  std::vector<CorrelationRow> correlations;
};

// Sentence-level relations between sent_uniq, divisive word counts and
// opponent mentions. Empty strata are omitted.
MetricRelations relate_metrics(std::span<const UniquenessRecord> records, const Corpus& corpus,
                               const Lexicon& lexicon, const MentionPolicy& mention = {});

void write_relations_csv(std::ostream& out, const MetricRelations& rel);

// Spearman matrix over uniqueness, length and the four readability indices.
// Undefined entries are written as "nan".
void write_correlation_matrix_csv(std::ostream& out, std::span<const UniquenessRecord> records,
                                  const Corpus& corpus);

}  // namespace rhetoric

#endif  // RHETORIC_ANALYSIS_HPP_
