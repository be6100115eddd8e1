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

#include "rhetoric/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Core>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "rhetoric/csv.hpp"
#include "rhetoric/embedded_data.hpp"

namespace rhetoric {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

const std::unordered_map<std::string, int>& syllable_exceptions() {
  static const auto table = [] {
    std::unordered_map<std::string, int> t;
    std::istringstream in{std::string(data::syllable_exceptions())};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto f = split(line, '\t');
      if (f.size() == 2) t.emplace(f[0], std::stoi(f[1]));
    }
    return t;
  }();
  return table;
}

const std::unordered_set<std::string>& easy_words() {
  static const auto words = [] {
    std::unordered_set<std::string> w;
    std::istringstream in{std::string(data::dale_chall_easy_words())};
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (!line.empty()) w.insert(to_lower_ascii(line));
    }
    return w;
  }();
  return words;
}

std::string letters_of(std::string_view word) {
  std::string out;
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::size_t alnum_count(std::string_view word) {
  return static_cast<std::size_t>(std::count_if(word.begin(), word.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  }));
}

}  // namespace

int count_syllables(std::string_view word) {
  const std::string w = letters_of(word);
  if (w.empty()) return 1;
  if (auto it = syllable_exceptions().find(w); it != syllable_exceptions().end()) {
    return it->second;
  }
  int groups = 0;
  bool prev = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev) ++groups;
    prev = v;
  }
  // Silent final e, except consonant + "le" and vowel + "e".
  const std::size_t n = w.size();
  if (groups > 1 && w.back() == 'e' && n >= 2 && !is_vowel(w[n - 2])) {
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

ReadabilityScores readability(std::string_view normalized_text) {
  const auto words = split_whitespace(normalized_text);
  if (words.empty()) throw Error("readability of a sentence without words");
  double syllables = 0.0, complex = 0.0, difficult = 0.0, chars = 0.0;
  for (const auto& w : words) {
    const int syl = count_syllables(w);
    syllables += syl;
    if (syl >= 3) complex += 1.0;
    const std::string letters = letters_of(w);
    if (!letters.empty() && !easy_words().count(to_lower_ascii(w)) && !easy_words().count(letters)) {
      difficult += 1.0;
    }
    chars += static_cast<double>(alnum_count(w));
  }
  const double n = static_cast<double>(words.size());
  ReadabilityScores r;
  r.fkgl = 0.39 * n + 11.8 * (syllables / n) - 15.59;
  r.fog = 0.4 * (n + 100.0 * (complex / n));
  const double pct_difficult = 100.0 * difficult / n;
  r.dale_chall = 0.1579 * pct_difficult + 0.0496 * n + (pct_difficult > 5.0 ? 3.6365 : 0.0);
  r.ari = 4.71 * (chars / n) + 0.5 * n - 21.43;
  return r;
}

ReadabilityScores readability(const Sentence& s) { return readability(s.normalized_text); }

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

Spearman spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman inputs differ in length");
  if (x.size() < 3) throw Error("spearman needs at least three pairs");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error("spearman input is not finite");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::ArrayXd> ax(rx.data(), n), ay(ry.data(), n);
  const Eigen::ArrayXd dx = ax - ax.mean();
  const Eigen::ArrayXd dy = ay - ay.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  Spearman out;
  if (sxx == 0.0 || syy == 0.0) {
    out.defined = false;
    out.rho = out.p = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.rho = std::clamp((dx * dy).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  if (std::abs(out.rho) >= 1.0) {
    out.p = 0.0;
  } else {
    const double t = out.rho * std::sqrt(df / (1.0 - out.rho * out.rho));
    boost::math::students_t dist(df);
    out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return out;
}

namespace {

struct SentenceMetrics {
  std::vector<double> uniq, divisive, mention, length;
};

}  // namespace

MetricRelations relate_metrics(std::span<const UniquenessRecord> records, const Corpus& corpus,
                               const Lexicon& lexicon, const MentionPolicy& mention) {
  SentenceMetrics m;
  for (const auto& r : records) {
    auto idx = corpus.sentence_index(r.sentence_id);
    if (!idx) throw Error(fmt::format("record '{}' has no sentence in the corpus", r.sentence_id));
    const Sentence& s = corpus.sentences()[*idx];
    m.uniq.push_back(r.sent_uniq);
    m.divisive.push_back(static_cast<double>(count_divisive(s.normalized_text, lexicon)));
    m.mention.push_back(counts_as_mention(s, mention) ? 1.0 : 0.0);
    m.length.push_back(static_cast<double>(s.word_count));
  }

  MetricRelations rel;
  auto stratify = [&](const std::string& name, const std::vector<double>& flag) {
    std::vector<double> yes, no;
    for (std::size_t i = 0; i < flag.size(); ++i) (flag[i] > 0.0 ? yes : no).push_back(m.uniq[i]);
    std::optional<double> mean_yes, mean_no;
    for (auto [label, values] : {std::pair{"yes", &yes}, std::pair{"no", &no}}) {
      if (values->empty()) continue;
      const Eigen::Map<const Eigen::VectorXd> v(values->data(),
                                                static_cast<Eigen::Index>(values->size()));
      const Interval ci = normal_ci(v);
      rel.groups.push_back({name, label, values->size(), ci.mean, ci.low, ci.high});
      (std::string_view(label) == "yes" ? mean_yes : mean_no) = ci.mean;
    }
    if (mean_yes && mean_no) rel.gaps.emplace_back(name, *mean_yes - *mean_no);
  };
  stratify("divisive", m.divisive);
  stratify("mention", m.mention);

  if (records.size() >= 3) {
    const std::vector<std::pair<std::string, const std::vector<double>*>> vars = {
        {"sent_uniq", &m.uniq},
        {"divisive_count", &m.divisive},
        {"mention", &m.mention},
        {"length", &m.length}};
    for (std::size_t a = 0; a < vars.size(); ++a) {
      for (std::size_t b = a + 1; b < vars.size(); ++b) {
        rel.correlations.push_back({vars[a].first, vars[b].first, records.size(),
                                    spearman(*vars[a].second, *vars[b].second)});
      }
    }
  }
  return rel;
}

void write_relations_csv(std::ostream& out, const MetricRelations& rel) {
  out << "kind,x,y,n,value,ci_low,ci_high,p\n";
  for (const auto& g : rel.groups) {
    out << csv::row({"group_mean", g.stratum, g.group, std::to_string(g.n), csv::num(g.mean),
                     csv::num(g.ci_low), csv::num(g.ci_high), ""});
  }
  for (const auto& [stratum, gap] : rel.gaps) {
    out << csv::row({"gap", stratum, "yes-no", "", csv::num(gap), "", "", ""});
  }
  for (const auto& c : rel.correlations) {
    out << csv::row({"spearman", c.x, c.y, std::to_string(c.n), csv::num(c.result.rho), "", "",
                     csv::num(c.result.p)});
  }
}

void write_correlation_matrix_csv(std::ostream& out, std::span<const UniquenessRecord> records,
                                  const Corpus& corpus) {
  const std::vector<std::string> names = {"uniqueness", "length", "fkgl",
                                          "fog",        "dale_chall", "ari"};
  std::vector<std::vector<double>> cols(names.size());
  for (const auto& r : records) {
    auto idx = corpus.sentence_index(r.sentence_id);
    if (!idx) throw Error(fmt::format("record '{}' has no sentence in the corpus", r.sentence_id));
    const Sentence& s = corpus.sentences()[*idx];
    const auto rs = readability(s);
    const double row[] = {r.sent_uniq, static_cast<double>(s.word_count), rs.fkgl, rs.fog,
                          rs.dale_chall, rs.ari};
    for (std::size_t k = 0; k < names.size(); ++k) cols[k].push_back(row[k]);
  }
  out << "metric," << join(names, ",") << '\n';
  for (std::size_t a = 0; a < names.size(); ++a) {
    std::vector<std::string> fields = {names[a]};
    for (std::size_t b = 0; b < names.size(); ++b) {
      double rho = std::numeric_limits<double>::quiet_NaN();
      if (records.size() >= 3) {
        const auto s = spearman(cols[a], cols[b]);
        if (s.defined) rho = s.rho;
      }
      fields.push_back(csv::num(rho));
    }
    out << csv::row(fields);
  }
}

}  // namespace rhetoric
