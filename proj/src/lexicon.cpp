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

#include "rhetoric/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "rhetoric/csv.hpp"
#include "rhetoric/embedded_data.hpp"

namespace rhetoric {

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocabulary, Eigen::MatrixXd vectors)
    : vocabulary_(std::move(vocabulary)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(vocabulary_.size()) != vectors_.rows()) {
    throw Error(fmt::format("embedding table has {} terms but {} vectors", vocabulary_.size(),
                            vectors_.rows()));
  }
  if (!vectors_.allFinite()) throw Error("embedding table contains non-finite values");
  for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
    if (!index_.emplace(vocabulary_[static_cast<std::size_t>(i)], i).second) {
      throw Error(fmt::format("duplicate embedding term '{}'", vocabulary_[static_cast<std::size_t>(i)]));
    }
  }
}

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError(fmt::format("embeddings line {}: no vector", line_no));
    std::vector<double> v;
    v.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(fields[i], &used));
        if (used != fields[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(fmt::format("embeddings line {}: bad value '{}'", line_no, fields[i]));
      }
    }
    if (dim == 0) dim = v.size();
    if (v.size() != dim) {
      throw ParseError(fmt::format("embeddings line {}: dimension {} differs from {}", line_no,
                                   v.size(), dim));
    }
    vocab.push_back(fields[0]);
    rows.push_back(std::move(v));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.row(static_cast<Eigen::Index>(r)) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[r].data(), static_cast<Eigen::Index>(dim));
  }
  return EmbeddingTable(std::move(vocab), std::move(m));
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return parse(in);
}

std::optional<Eigen::Index> EmbeddingTable::index(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

Eigen::MatrixXd normalized_rows(const Eigen::MatrixXd& m) {
  Eigen::VectorXd norms = m.rowwise().norm();
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (norms(i) > 0) {
      out.row(i) /= norms(i);
    } else {
      out.row(i).setZero();
    }
  }
  return out;
}

}  // namespace

std::vector<SeedCandidate> expand_seeds(const std::vector<std::string>& seeds,
                                        const EmbeddingTable& emb, int k, SeedAggregation agg) {
  if (k < 1) throw Error("expand_seeds: k must be at least 1");
  if (seeds.empty()) throw Error("expand_seeds: no seeds");
  std::vector<Eigen::Index> seed_rows;
  std::set<Eigen::Index> seed_set;
  for (const auto& s : seeds) {
    auto idx = emb.index(s);
    if (!idx) throw Error(fmt::format("seed '{}' is not in the embedding vocabulary", s));
    seed_rows.push_back(*idx);
    seed_set.insert(*idx);
  }
  const Eigen::MatrixXd unit = normalized_rows(emb.vectors());
  Eigen::MatrixXd seed_unit(static_cast<Eigen::Index>(seed_rows.size()), unit.cols());
  for (std::size_t i = 0; i < seed_rows.size(); ++i) {
    seed_unit.row(static_cast<Eigen::Index>(i)) = unit.row(seed_rows[i]);
  }
  // vocabulary x seeds cosine matrix
  const Eigen::MatrixXd cos = unit * seed_unit.transpose();
  const Eigen::VectorXd score =
      agg == SeedAggregation::kMax ? Eigen::VectorXd(cos.rowwise().maxCoeff())
                                   : Eigen::VectorXd(cos.rowwise().mean());

  std::vector<SeedCandidate> all;
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    if (seed_set.count(i)) continue;
    all.push_back({emb.vocabulary()[static_cast<std::size_t>(i)], score(i)});
  }
  std::sort(all.begin(), all.end(), [](const SeedCandidate& a, const SeedCandidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.term < b.term;
  });
  if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
  return all;
}

namespace {

void validate_term(const std::string& term, int line_no) {
  const std::string where = line_no > 0 ? fmt::format("lexicon line {}", line_no) : "lexicon";
  if (term.empty()) throw ParseError(fmt::format("{}: empty term", where));
  for (char c : term) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      throw ParseError(fmt::format("{}: multi-word entry '{}' is not supported", where, term));
    }
    if (std::isupper(u) || std::ispunct(u)) {
      throw ParseError(fmt::format("{}: term '{}' is not normalized", where, term));
    }
  }
}

}  // namespace

void Lexicon::add(std::string term, bool seed, std::optional<int> yes_votes) {
  validate_term(term, 0);
  if (!terms_.insert(term).second) throw Error(fmt::format("duplicate lexicon term '{}'", term));
  if (seed) seeds_.insert(term);
  if (yes_votes) votes_[term] = *yes_votes;
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    bool seed = false;
    if (line.back() == '*') {
      seed = true;
      line.pop_back();
      line = trim(line);
    }
    validate_term(line, line_no);
    if (lex.contains(line)) {
      throw ParseError(fmt::format("lexicon line {}: duplicate term '{}'", line_no, line));
    }
    lex.add(line, seed);
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Lexicon& Lexicon::bundled() {
  static const Lexicon kLexicon = parse(data::divisive_lexicon());
  return kLexicon;
}

void Lexicon::write(std::ostream& out) const {
  for (const auto& t : terms_) {
    out << t << (seeds_.count(t) ? "*" : "") << '\n';
  }
}

AnnotationMatrix AnnotationMatrix::parse(std::istream& in) {
  const auto table = csv::read(in);
  if (table.header.size() < 2) throw ParseError("annotation matrix: header needs term and raters");
  AnnotationMatrix m;
  m.raters.assign(table.header.begin() + 1, table.header.end());
  const auto r = static_cast<Eigen::Index>(m.raters.size());
  m.labels.resize(static_cast<Eigen::Index>(table.rows.size()), r);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    if (static_cast<Eigen::Index>(f.size()) != r + 1) {
      throw ParseError(fmt::format("annotation matrix line {}: expected {} fields",
                                   table.line_numbers[i], r + 1));
    }
    m.items.push_back(trim(f[0]));
    for (Eigen::Index j = 0; j < r; ++j) {
      const std::string v = trim(f[static_cast<std::size_t>(j + 1)]);
      if (v != "0" && v != "1") {
        throw ParseError(fmt::format("annotation matrix line {}: label '{}' is not 0/1",
                                     table.line_numbers[i], v));
      }
      m.labels(static_cast<Eigen::Index>(i), j) = v == "1" ? 1 : 0;
    }
  }
  return m;
}

AnnotationMatrix AnnotationMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return parse(in);
}

namespace {

void require_binary(const AnnotationMatrix& m) {
  if (static_cast<std::size_t>(m.labels.rows()) != m.items.size()) {
    throw Error("annotation matrix: item count does not match label rows");
  }
  if ((m.labels.array() != 0 && m.labels.array() != 1).any()) {
    throw Error("annotation matrix: labels must be 0 or 1");
  }
}

}  // namespace

Lexicon aggregate_votes(const AnnotationMatrix& m, const std::set<std::string>& seeds) {
  require_binary(m);
  if (m.labels.cols() < 2) throw Error("aggregate_votes needs at least two raters");
  const Eigen::VectorXi yes = m.labels.rowwise().sum();
  Lexicon lex;
  for (Eigen::Index i = 0; i < m.labels.rows(); ++i) {
    if (2 * yes(i) > m.labels.cols()) {
      const auto& term = m.items[static_cast<std::size_t>(i)];
      lex.add(term, seeds.count(term) > 0, yes(i));
    }
  }
  return lex;
}

std::vector<MajorityClassRow> majority_class_table(const AnnotationMatrix& m) {
  require_binary(m);
  const int r = static_cast<int>(m.labels.cols());
  const int smallest = (r + 1) / 2;
  std::vector<MajorityClassRow> rows;
  for (int size = r; size >= smallest; --size) rows.push_back({size, 0.0});
  const Eigen::Index n = m.labels.rows();
  if (n == 0) return rows;
  const Eigen::VectorXi yes = m.labels.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    const int majority = std::max(yes(i), r - yes(i));
    rows[static_cast<std::size_t>(r - majority)].percent += 1.0;
  }
  for (auto& row : rows) row.percent = 100.0 * row.percent / static_cast<double>(n);
  return rows;
}

FleissKappa fleiss_kappa(const AnnotationMatrix& m) {
  require_binary(m);
  const Eigen::Index n_items = m.labels.rows();
  const Eigen::Index r = m.labels.cols();
  if (r < 2 || n_items < 2) throw Error("fleiss_kappa needs at least two raters and two items");
  const Eigen::ArrayXd yes = m.labels.rowwise().sum().cast<double>().array();
  const Eigen::ArrayXd no = static_cast<double>(r) - yes;
  const double rd = static_cast<double>(r);
  const Eigen::ArrayXd per_item = (yes.square() + no.square() - rd) / (rd * (rd - 1.0));
  FleissKappa out;
  out.observed = per_item.mean();
  const double p_yes = yes.sum() / (static_cast<double>(n_items) * rd);
  const double p_no = 1.0 - p_yes;
  out.expected = p_yes * p_yes + p_no * p_no;
  if (out.expected == 1.0) {
    out.degenerate = true;
    out.kappa = 1.0;
    return out;
  }
  out.kappa = (out.observed - out.expected) / (1.0 - out.expected);
  return out;
}

std::size_t count_divisive(std::string_view normalized_text, const Lexicon& lex) {
  std::size_t n = 0;
  for (const auto& w : split_whitespace(normalized_text)) n += lex.contains(w) ? 1 : 0;
  return n;
}

std::vector<DivisiveFrequencyRow> divisive_frequency(const Corpus& corpus, const Lexicon& lex,
                                                     DivisiveGroup group_by) {
  std::map<std::string, DivisiveFrequencyRow> rows;
  std::vector<std::string> order;
  std::size_t corpus_words = 0;
  std::map<std::string, std::size_t> term_counts;
  for (const auto& s : corpus.sentences()) {
    if (!corpus.speaker(s.speaker_id).is_pool_member) continue;
    const auto words = split_whitespace(s.normalized_text);
    corpus_words += words.size();
    if (group_by == DivisiveGroup::kTerm) {
      for (const auto& w : words) {
        if (lex.contains(w)) ++term_counts[w];
      }
      continue;
    }
    std::string key;
    if (group_by == DivisiveGroup::kSpeaker) {
      key = s.speaker_id;
    } else {
      const auto& d = corpus.document(s.doc_id);
      if (!d.date) continue;
      key = std::to_string(year_of(*d.date));
    }
    auto [it, inserted] = rows.try_emplace(key);
    if (inserted) {
      it->second.group = key;
      order.push_back(key);
    }
    it->second.total_words += words.size();
    for (const auto& w : words) it->second.matches += lex.contains(w) ? 1 : 0;
  }
  std::vector<DivisiveFrequencyRow> out;
  if (group_by == DivisiveGroup::kTerm) {
    for (const auto& [term, count] : term_counts) {
      DivisiveFrequencyRow row{term, count, corpus_words, 0.0};
      row.frequency = static_cast<double>(count) / static_cast<double>(corpus_words);
      out.push_back(row);
    }
    return out;
  }
  if (group_by == DivisiveGroup::kYear) std::sort(order.begin(), order.end());
  for (const auto& key : order) {
    auto row = rows[key];
    if (row.total_words == 0) continue;
    row.frequency = static_cast<double>(row.matches) / static_cast<double>(row.total_words);
    out.push_back(row);
  }
  return out;
}

std::vector<HeatmapCell> divisive_heatmap(const Corpus& corpus, const Lexicon& lex) {
  std::map<std::string, std::size_t> totals;
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& s : corpus.sentences()) {
    if (!corpus.speaker(s.speaker_id).is_pool_member) continue;
    if (!totals.count(s.speaker_id)) order.push_back(s.speaker_id);
    const auto words = split_whitespace(s.normalized_text);
    totals[s.speaker_id] += words.size();
    for (const auto& w : words) {
      if (lex.contains(w)) ++counts[{s.speaker_id, w}];
    }
  }
  std::vector<HeatmapCell> out;
  for (const auto& sp : order) {
    for (auto it = counts.lower_bound({sp, ""}); it != counts.end() && it->first.first == sp; ++it) {
      out.push_back({sp, it->first.second, it->second,
                     static_cast<double>(it->second) / static_cast<double>(totals[sp])});
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::size_t>> top_divisive_terms(const Corpus& corpus,
                                                                    const Lexicon& lex,
                                                                    std::string_view speaker,
                                                                    int n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : corpus.sentences()) {
    if (s.speaker_id != speaker) continue;
    for (const auto& w : split_whitespace(s.normalized_text)) {
      if (lex.contains(w)) ++counts[w];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (n < 0) n = 0;
  if (out.size() > static_cast<std::size_t>(n)) out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace rhetoric
