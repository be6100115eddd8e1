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

#include "rhetoric/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "json.hpp"
#include "rhetoric/opponent_tagging.hpp"
#include "rhetoric/parallel.hpp"

namespace rhetoric {

using nlohmann::json;

UniquenessRecord make_record(std::string sentence_id, std::string speaker_id,
                             double bpc_original, std::map<std::string, double> bpc_alternates) {
  if (bpc_alternates.empty()) {
    throw Error(fmt::format("sentence '{}' has no alternate speakers", sentence_id));
  }
  if (bpc_alternates.count(speaker_id)) {
    throw Error(fmt::format("sentence '{}' lists its own speaker as an alternate", sentence_id));
  }
  double sum = 0.0;
  for (const auto& [_, v] : bpc_alternates) sum += v;
  UniquenessRecord r;
  r.sentence_id = std::move(sentence_id);
  r.speaker_id = std::move(speaker_id);
  r.bpc_original = bpc_original;
  r.sent_uniq = sum / static_cast<double>(bpc_alternates.size()) - bpc_original;
  r.bpc_alternates = std::move(bpc_alternates);
  return r;
}

PoolPolicy PoolPolicy::for_corpus(const Corpus& corpus, std::vector<std::string> pool) {
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() < 2) throw Error("speaker pool needs at least two members");
  for (const auto& p : pool) {
    if (!corpus.find_speaker(p)) {
      throw Error(fmt::format("pool speaker '{}' does not appear in the corpus", p));
    }
  }
  PoolPolicy policy;
  policy.pool = std::move(pool);
  if (corpus.genre() == Genre::kDebate) {
    for (const auto& d : corpus.documents()) {
      auto& ex = policy.exclusions[d.id];
      for (std::size_t i : corpus.document_sentences(d.id)) {
        const auto& sp = corpus.sentences()[i].speaker_id;
        if (policy.contains(sp)) ex.insert(sp);
      }
    }
  }
  return policy;
}

bool PoolPolicy::contains(std::string_view speaker) const {
  return std::binary_search(pool.begin(), pool.end(), speaker, std::less<>());
}

std::vector<std::string> PoolPolicy::alternates(std::string_view doc_id,
                                                std::string_view original) const {
  const std::set<std::string>* excluded = nullptr;
  if (auto it = exclusions.find(std::string(doc_id)); it != exclusions.end()) {
    excluded = &it->second;
  }
  std::vector<std::string> out;
  for (const auto& p : pool) {
    if (p == original) continue;
    if (excluded && excluded->count(p)) continue;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw Error(fmt::format("no alternate speakers for '{}' in document '{}'", original, doc_id));
  }
  return out;
}

namespace {

double score_bpc(const Corpus& corpus, std::size_t index, std::string_view prompt_speaker,
                 const LossBackend& backend, int window) {
  const auto req = make_request(corpus, index, prompt_speaker, window);
  return bpc(req, token_losses(backend, req));
}

}  // namespace

UniquenessRecord sent_uniq(const Corpus& corpus, std::size_t sentence_index,
                           const LossBackend& backend, const PoolPolicy& policy,
                           const ScoringOptions& options) {
  const Sentence& s = corpus.sentences().at(sentence_index);
  if (!policy.contains(s.speaker_id)) {
    throw Error(fmt::format("speaker '{}' of sentence '{}' is not in the pool", s.speaker_id, s.id));
  }
  const auto alts = policy.alternates(s.doc_id, s.speaker_id);
  const double original =
      score_bpc(corpus, sentence_index, s.speaker_id, backend, options.window_tokens);
  std::map<std::string, double> alt_bpc;
  for (const auto& a : alts) {
    alt_bpc[a] = score_bpc(corpus, sentence_index, a, backend, options.window_tokens);
  }
  return make_record(s.id, s.speaker_id, original, std::move(alt_bpc));
}

std::vector<UniquenessRecord> score_corpus(const Corpus& corpus, const LossBackend& backend,
                                           const PoolPolicy& policy,
                                           const ScoringOptions& options) {
  struct Job {
    std::size_t sentence;
    std::size_t slot;
    const std::string* speaker;
  };
  std::vector<std::size_t> targets;
  std::vector<std::vector<std::string>> alternates;
  std::vector<Job> jobs;
  std::size_t slots = 0;
  for (std::size_t i = 0; i < corpus.sentences().size(); ++i) {
    const auto& s = corpus.sentences()[i];
    if (!policy.contains(s.speaker_id)) continue;
    targets.push_back(i);
    alternates.push_back(policy.alternates(s.doc_id, s.speaker_id));
  }
  std::vector<std::size_t> first_slot(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    first_slot[t] = slots;
    jobs.push_back({targets[t], slots++, &corpus.sentences()[targets[t]].speaker_id});
    for (const auto& a : alternates[t]) jobs.push_back({targets[t], slots++, &a});
  }
  std::vector<double> values(slots, 0.0);
  parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
    const auto& job = jobs[j];
    values[job.slot] =
        score_bpc(corpus, job.sentence, *job.speaker, backend, options.window_tokens);
  });

  std::vector<UniquenessRecord> out;
  out.reserve(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& s = corpus.sentences()[targets[t]];
    std::map<std::string, double> alt;
    for (std::size_t a = 0; a < alternates[t].size(); ++a) {
      alt[alternates[t][a]] = values[first_slot[t] + 1 + a];
    }
    out.push_back(make_record(s.id, s.speaker_id, values[first_slot[t]], std::move(alt)));
  }
  return out;
}

double speaker_uniq(std::span<const UniquenessRecord> records, std::string_view speaker) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.speaker_id != speaker) continue;
    sum += r.sent_uniq;
    ++n;
  }
  if (n == 0) throw Error(fmt::format("no uniqueness records for speaker '{}'", speaker));
  return sum / static_cast<double>(n);
}

Interval normal_ci(const Eigen::Ref<const Eigen::VectorXd>& values) {
  const Eigen::Index n = values.size();
  if (n == 0) throw Error("confidence interval of an empty sample");
  Interval out;
  out.mean = values.mean();
  if (n < 2) {
    out.low = out.high = out.mean;
    return out;
  }
  const double var = (values.array() - out.mean).square().sum() / static_cast<double>(n - 1);
  const double half = 1.96 * std::sqrt(var / static_cast<double>(n));
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

Interval bootstrap_ci(const Eigen::Ref<const Eigen::VectorXd>& values, int samples,
                      std::uint64_t seed) {
  const Eigen::Index n = values.size();
  if (n == 0) throw Error("confidence interval of an empty sample");
  if (samples < 1) throw Error("bootstrap needs at least one resample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  std::vector<double> means(static_cast<std::size_t>(samples));
  for (auto& m : means) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sum += values(pick(rng));
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return means[lo] + (means[hi] - means[lo]) * (pos - static_cast<double>(lo));
  };
  return {values.mean(), quantile(0.025), quantile(0.975)};
}

std::vector<double> top_decile(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  const auto keep = static_cast<std::size_t>(std::ceil(static_cast<double>(values.size()) / 10.0));
  values.resize(std::min(values.size(), keep));
  return values;
}

std::string party_group(const Corpus& corpus, std::string_view speaker,
                        std::string_view focus_speaker) {
  if (speaker == focus_speaker) return std::string(speaker);
  switch (corpus.speaker(speaker).party) {
    case Party::kRepublican:
      return "Other Republicans";
    case Party::kDemocrat:
      return "Democrats";
    case Party::kOther:
      break;
  }
  return "Other";
}

namespace {

struct KeyPart {
  double order = 0.0;
  std::string label;
  auto operator<=>(const KeyPart&) const = default;
};

std::optional<KeyPart> key_part(Dimension dim, const UniquenessRecord& r, const Sentence& s,
                                const Corpus& corpus, const AggregateOptions& opt) {
  switch (dim) {
    case Dimension::kSpeaker:
    case Dimension::kDecile:
      return KeyPart{0.0, r.speaker_id};
    case Dimension::kParty: {
      const auto g = party_group(corpus, r.speaker_id, opt.focus_speaker);
      const double order = g == opt.focus_speaker ? 0.0 : g == "Other Republicans" ? 1.0
                                                       : g == "Democrats"         ? 2.0
                                                                                  : 3.0;
      return KeyPart{order, g};
    }
    case Dimension::kLengthBin: {
      const int w = static_cast<int>(s.word_count);
      if (w > opt.length_max) return std::nullopt;
      int lo = (w / opt.length_bin_width) * opt.length_bin_width;
      if (lo >= opt.length_max) lo = opt.length_max - opt.length_bin_width;
      return KeyPart{static_cast<double>(lo),
                     fmt::format("{}-{}", lo, lo + opt.length_bin_width)};
    }
    case Dimension::kYear: {
      const auto& d = corpus.document(s.doc_id);
      if (!d.date) return std::nullopt;
      const int y = year_of(*d.date);
      return KeyPart{static_cast<double>(y), std::to_string(y)};
    }
    case Dimension::kTerm: {
      const auto& d = corpus.document(s.doc_id);
      if (!d.election_cycle) return std::nullopt;
      return KeyPart{static_cast<double>(*d.election_cycle), std::to_string(*d.election_cycle)};
    }
    case Dimension::kMention: {
      const bool y = counts_as_mention(s, {});
      return KeyPart{y ? 0.0 : 1.0, y ? "Y" : "N"};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<GroupStat> aggregate(std::span<const UniquenessRecord> records, const Corpus& corpus,
                                 std::span<const Dimension> dims,
                                 const AggregateOptions& options) {
  if (options.length_bin_width < 1 || options.length_max < options.length_bin_width) {
    throw Error("invalid length bins");
  }
  const bool decile = std::find(dims.begin(), dims.end(), Dimension::kDecile) != dims.end();
  std::map<std::vector<KeyPart>, std::vector<double>> groups;
  for (const auto& r : records) {
    auto idx = corpus.sentence_index(r.sentence_id);
    if (!idx) throw Error(fmt::format("record '{}' has no sentence in the corpus", r.sentence_id));
    const Sentence& s = corpus.sentences()[*idx];
    std::vector<KeyPart> key;
    bool keep = true;
    for (Dimension d : dims) {
      auto part = key_part(d, r, s, corpus, options);
      if (!part) {
        keep = false;
        break;
      }
      key.push_back(std::move(*part));
    }
    if (!keep) continue;
    groups[key].push_back(options.metric == Metric::kSentUniq ? r.sent_uniq : r.bpc_original);
  }
  std::vector<GroupStat> out;
  for (auto& [key, values] : groups) {
    if (decile) values = top_decile(std::move(values));
    if (values.empty()) continue;
    std::vector<std::string> labels;
    for (const auto& k : key) labels.push_back(k.label);
    GroupStat g;
    g.group = join(labels, "|");
    g.n = values.size();
    const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
    const Interval ci = options.ci == CiMethod::kNormal
                            ? normal_ci(v)
                            : bootstrap_ci(v, options.bootstrap_samples,
                                           options.seed ^ fnv1a64(g.group));
    g.mean = ci.mean;
    g.ci_low = ci.low;
    g.ci_high = ci.high;
    out.push_back(std::move(g));
  }
  return out;
}

void write_records(std::ostream& out, std::span<const UniquenessRecord> records,
                   std::string_view meta_json) {
  if (!meta_json.empty()) out << json{{"_meta", json::parse(meta_json)}}.dump() << '\n';
  for (const auto& r : records) {
    json j;
    j["sentence_id"] = r.sentence_id;
    j["speaker"] = r.speaker_id;
    j["bpc_original"] = r.bpc_original;
    j["bpc_alternates"] = r.bpc_alternates;
    j["sent_uniq"] = r.sent_uniq;
    out << j.dump() << '\n';
  }
}

RecordFile read_records(std::istream& in) {
  RecordFile file;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
      if (j.contains("_meta")) {
        file.meta = j["_meta"].dump();
        continue;
      }
      UniquenessRecord r;
      r.sentence_id = j.at("sentence_id").get<std::string>();
      r.speaker_id = j.at("speaker").get<std::string>();
      r.bpc_original = j.at("bpc_original").get<double>();
      r.bpc_alternates = j.at("bpc_alternates").get<std::map<std::string, double>>();
      r.sent_uniq = j.at("sent_uniq").get<double>();
      file.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(fmt::format("records line {}: {}", line_no, e.what()));
    }
  }
  return file;
}

}  // namespace rhetoric
