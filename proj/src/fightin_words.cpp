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

#include "rhetoric/fightin_words.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Core>
#include <fmt/format.h>

#include "rhetoric/csv.hpp"
#include "rhetoric/parallel.hpp"

namespace rhetoric {

std::map<std::string, double> fw_zscores(const TokenCounts& a, const TokenCounts& b,
                                         const TokenCounts& prior, double prior_scale) {
  if (!(prior_scale > 0.0) || !std::isfinite(prior_scale)) {
    throw Error("prior_scale must be positive");
  }
  std::vector<std::string> vocab;
  for (const auto& [w, c] : a) {
    if (c < 0) throw Error(fmt::format("negative count for '{}'", w));
    vocab.push_back(w);
  }
  for (const auto& [w, c] : b) {
    if (c < 0) throw Error(fmt::format("negative count for '{}'", w));
    if (!a.count(w)) vocab.push_back(w);
  }
  std::sort(vocab.begin(), vocab.end());

  double prior_total = 0.0;
  for (const auto& [w, c] : prior) {
    if (c < 0) throw Error(fmt::format("negative prior count for '{}'", w));
    prior_total += static_cast<double>(c);
  }

  const auto m = static_cast<Eigen::Index>(vocab.size());
  Eigen::ArrayXd ya(m), yb(m), alpha(m);
  double na = 0.0, nb = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& w = vocab[static_cast<std::size_t>(i)];
    auto pa = a.find(w);
    auto pb = b.find(w);
    auto pp = prior.find(w);
    if (pp == prior.end() || pp->second == 0) {
      throw Error(fmt::format("prior has zero mass for '{}'", w));
    }
    ya(i) = pa == a.end() ? 0.0 : static_cast<double>(pa->second);
    yb(i) = pb == b.end() ? 0.0 : static_cast<double>(pb->second);
    alpha(i) = prior_scale * static_cast<double>(pp->second) / prior_total;
  }
  na = ya.sum();
  nb = yb.sum();
  const double a0 = prior_scale;

  const Eigen::ArrayXd delta = ((ya + alpha) / (na + a0 - ya - alpha)).log() -
                               ((yb + alpha) / (nb + a0 - yb - alpha)).log();
  const Eigen::ArrayXd var = (ya + alpha).inverse() + (yb + alpha).inverse();
  const Eigen::ArrayXd z = delta / var.sqrt();

  std::map<std::string, double> out;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& w = vocab[static_cast<std::size_t>(i)];
    if (!std::isfinite(z(i))) {
      throw Error(fmt::format("z-score for '{}' is not finite; the prior needs more than one word", w));
    }
    out.emplace(w, z(i));
  }
  return out;
}

std::string_view to_string(FwSide side) { return side == FwSide::kY ? "Y" : "N"; }

TokenCounts filtered_counts(const Corpus& corpus, const std::vector<std::size_t>& sentences,
                            const TokenFilter& filter) {
  TokenCounts counts;
  for (std::size_t i : sentences) {
    const Sentence& s = corpus.sentences().at(i);
    const auto words = split_whitespace(s.normalized_text);
    if (filter.tags.empty()) {
      for (const auto& w : words) ++counts[w];
      continue;
    }
    if (words.empty()) continue;
    if (s.pos_tags.empty()) {
      throw Error(fmt::format(
          "sentence '{}' has no pos_tags; the '{}' token filter needs them", s.id, filter.name));
    }
    if (s.pos_tags.size() != words.size()) {
      throw Error(fmt::format("sentence '{}' has {} pos_tags for {} words", s.id,
                              s.pos_tags.size(), words.size()));
    }
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (filter.keep(s.pos_tags[k])) ++counts[words[k]];
    }
  }
  return counts;
}

std::vector<FwResult> fw_for_speakers(const Corpus& corpus,
                                      const std::vector<std::string>& speakers,
                                      const FwOptions& options) {
  std::map<std::string, std::size_t> slot;
  for (std::size_t k = 0; k < speakers.size(); ++k) {
    if (!corpus.find_speaker(speakers[k])) {
      throw Error(fmt::format("unknown speaker '{}'", speakers[k]));
    }
    slot.emplace(speakers[k], k);
  }
  std::vector<std::size_t> pooled;
  std::vector<std::vector<std::size_t>> yes(speakers.size()), no(speakers.size());
  for (std::size_t i = 0; i < corpus.sentences().size(); ++i) {
    const Sentence& s = corpus.sentences()[i];
    auto it = slot.find(s.speaker_id);
    if (it == slot.end()) continue;
    pooled.push_back(i);
    (counts_as_mention(s, options.mention) ? yes : no)[it->second].push_back(i);
  }
  const TokenCounts prior = filtered_counts(corpus, pooled, options.filter);

  std::vector<FwResult> out(2 * speakers.size());
  parallel_for(speakers.size(), options.workers, [&](std::size_t k) {
    auto z = fw_zscores(filtered_counts(corpus, yes[k], options.filter),
                        filtered_counts(corpus, no[k], options.filter), prior,
                        options.prior_scale);
    out[2 * k] = {speakers[k], FwSide::kY, z, options.filter.name};
    out[2 * k + 1] = {speakers[k], FwSide::kN, std::move(z), options.filter.name};
  });
  return out;
}

TopWords top_n(const FwResult& result, int n) {
  if (n < 1) throw Error("top_n needs n >= 1");
  std::vector<std::pair<std::string, double>> ranked(result.z.begin(), result.z.end());
  const double sign = result.side == FwSide::kY ? 1.0 : -1.0;
  std::stable_sort(ranked.begin(), ranked.end(), [sign](const auto& x, const auto& y) {
    if (x.second != y.second) return sign * x.second > sign * y.second;
    return x.first < y.first;
  });
  TopWords top;
  top.truncated = ranked.size() < static_cast<std::size_t>(n);
  for (std::size_t k = 0; k < ranked.size() && k < static_cast<std::size_t>(n); ++k) {
    top.words.push_back(ranked[k].first);
  }
  return top;
}

FwOverlapGraph::FwOverlapGraph(std::map<std::string, std::vector<std::string>> topsets)
    : topsets_(std::move(topsets)) {
  for (auto& [speaker, words] : topsets_) {
    std::set<std::string> seen;
    for (const auto& w : words) {
      if (!seen.insert(w).second) {
        throw Error(fmt::format("top set of '{}' repeats '{}'", speaker, w));
      }
      ++degree_[w];
    }
  }
}

int FwOverlapGraph::degree(std::string_view word) const {
  auto it = degree_.find(word);
  return it == degree_.end() ? 0 : it->second;
}

double FwOverlapGraph::overlap(std::string_view speaker) const {
  auto it = topsets_.find(std::string(speaker));
  if (it == topsets_.end()) throw Error(fmt::format("unknown speaker '{}'", speaker));
  if (it->second.empty()) throw Error(fmt::format("top set of '{}' is empty", speaker));
  double sum = 0.0;
  for (const auto& w : it->second) sum += degree(w);
  return sum / static_cast<double>(it->second.size());
}

double overlap_metric(const std::map<std::string, std::vector<std::string>>& topsets,
                      std::string_view speaker) {
  return FwOverlapGraph(topsets).overlap(speaker);
}

std::vector<OverlapRow> overlap_report(const std::vector<FwResult>& results, int n) {
  std::vector<OverlapRow> rows;
  for (FwSide side : {FwSide::kY, FwSide::kN}) {
    std::map<std::string, std::vector<std::string>> sets;
    std::vector<std::string> order;
    for (const auto& r : results) {
      if (r.side != side) continue;
      sets[r.speaker] = top_n(r, n).words;
      order.push_back(r.speaker);
    }
    const FwOverlapGraph graph(sets);
    for (const auto& s : order) {
      if (sets[s].empty()) continue;
      rows.push_back({s, side, n, graph.overlap(s)});
    }
  }
  return rows;
}

void write_fw_csv(std::ostream& out, const std::vector<FwResult>& results, int n) {
  out << "speaker,side,word,zscore\n";
  for (const auto& r : results) {
    for (const auto& w : top_n(r, n).words) {
      out << csv::row({r.speaker, std::string(to_string(r.side)), w, csv::num(r.z.at(w))});
    }
  }
}

void write_overlap_csv(std::ostream& out, const std::vector<OverlapRow>& rows) {
  out << "speaker,side,n,score\n";
  for (const auto& r : rows) {
    out << csv::row({r.speaker, std::string(to_string(r.side)), std::to_string(r.n),
                     csv::num(r.score)});
  }
}

}  // namespace rhetoric
