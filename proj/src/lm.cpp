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

#include "rhetoric/lm.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "text_util.hpp"

namespace rhetoric {

void ScoringRequest::validate() const {
  if (target.empty()) throw Error("scoring request has an empty target");
  if (speaker_prompt.empty() || speaker_prompt.back() != ':') {
    throw Error(fmt::format("speaker prompt '{}' must end with ':'", speaker_prompt));
  }
}

double TokenLossSequence::total_bits() const {
  return std::accumulate(losses_bits.begin(), losses_bits.end(), 0.0);
}

std::vector<std::string> lm_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i).starts_with(kMaskToken)) {
      flush();
      out.emplace_back(kMaskToken);
      i += kMaskToken.size();
      continue;
    }
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      flush();
      ++i;
      continue;
    }
    // Apostrophes inside a word stay with it ("don't").
    if (c == '\'' && !word.empty() && i + 1 < text.size() &&
        std::isalnum(static_cast<unsigned char>(text[i + 1]))) {
      word.push_back('\'');
      ++i;
      continue;
    }
    if (const std::size_t p = text::punct_len(text, i)) {
      flush();
      out.emplace_back(text.substr(i, p));
      i += p;
      continue;
    }
    word.push_back(static_cast<char>(std::tolower(c)));
    ++i;
  }
  flush();
  return out;
}

UniformBackend::UniformBackend(std::size_t vocab_size) {
  if (vocab_size == 0) throw Error("uniform backend needs a nonempty vocabulary");
  bits_ = std::log2(static_cast<double>(vocab_size));
}

TokenLossSequence UniformBackend::token_losses(const ScoringRequest& req) const {
  req.validate();
  TokenLossSequence out;
  out.tokens = lm_tokenize(req.target);
  out.losses_bits.assign(out.tokens.size(), bits_);
  return out;
}

// ---------------------------------------------------------------------------
// NgramModel

std::size_t NgramModel::KeyHash::operator()(const std::vector<std::uint32_t>& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t v : k) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::uint32_t NgramModel::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? 0u : it->second;
}

std::vector<std::uint32_t> NgramModel::padded_ids(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> ids(static_cast<std::size_t>(order_ - 1), 1u);
  ids.reserve(ids.size() + tokens.size());
  for (const auto& t : tokens) ids.push_back(id_of(t));
  return ids;
}

void NgramModel::count(const std::vector<std::vector<std::string>>& sequences) {
  tables_.assign(static_cast<std::size_t>(order_), Table{});
  for (const auto& seq : sequences) {
    const auto ids = padded_ids(seq);
    const std::size_t pad = static_cast<std::size_t>(order_ - 1);
    for (std::size_t pos = pad; pos < ids.size(); ++pos) {
      for (std::size_t j = 1; j <= static_cast<std::size_t>(order_); ++j) {
        std::vector<std::uint32_t> key(ids.begin() + static_cast<std::ptrdiff_t>(pos - (j - 1)),
                                       ids.begin() + static_cast<std::ptrdiff_t>(pos));
        auto& ctx = tables_[j - 1][key];
        ++ctx.total;
        ++ctx.next[ids[pos]];
      }
    }
  }
}

double NgramModel::order_probability(std::size_t j, std::span<const std::uint32_t> padded_history,
                                     std::uint32_t w) const {
  const double v = static_cast<double>(vocabulary_size());
  std::vector<std::uint32_t> key(padded_history.end() - static_cast<std::ptrdiff_t>(j - 1),
                                 padded_history.end());
  const auto& table = tables_[j - 1];
  auto it = table.find(key);
  double c_h = 0.0;
  double c_hw = 0.0;
  if (it != table.end()) {
    c_h = static_cast<double>(it->second.total);
    if (auto n = it->second.next.find(w); n != it->second.next.end()) {
      c_hw = static_cast<double>(n->second);
    }
  }
  const double denom = c_h + add_k_ * v;
  if (denom <= 0.0) return 1.0 / v;
  return (c_hw + add_k_) / denom;
}

double NgramModel::probability_ids(std::span<const std::uint32_t> padded_history,
                                   std::uint32_t w) const {
  double p = 0.0;
  for (std::size_t j = 1; j <= static_cast<std::size_t>(order_); ++j) {
    if (lambdas_[j - 1] == 0.0) continue;
    p += lambdas_[j - 1] * order_probability(j, padded_history, w);
  }
  return p;
}

double NgramModel::probability(std::span<const std::string> history, std::string_view word) const {
  const auto ids = padded_ids(history);
  return probability_ids(ids, id_of(word));
}

std::vector<double> NgramModel::losses(std::span<const std::string> history,
                                       std::span<const std::string> targets) const {
  auto ids = padded_ids(history);
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    const std::uint32_t w = id_of(t);
    const double p = probability_ids(ids, w);
    if (!(p > 0.0)) {
      throw Error(fmt::format("n-gram model assigns zero probability to '{}'", t));
    }
    out.push_back(-std::log2(p));
    ids.push_back(w);
  }
  return out;
}

namespace {

void validate_config(const NgramConfig& c) {
  if (c.order < 1) throw Error(fmt::format("n-gram order must be at least 1, got {}", c.order));
  if (!(c.add_k >= 0.0) || !std::isfinite(c.add_k)) throw Error("add_k must be finite and >= 0");
  if (!c.lambdas.empty()) {
    if (static_cast<int>(c.lambdas.size()) != c.order) {
      throw Error(fmt::format("expected {} interpolation weights, got {}", c.order,
                              c.lambdas.size()));
    }
    double sum = 0.0;
    for (double l : c.lambdas) {
      if (!(l >= 0.0)) throw Error("interpolation weights must be nonnegative");
      sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("interpolation weights must sum to 1");
  }
  if (c.heldout_every < 2) throw Error("heldout_every must be at least 2");
}

}  // namespace

NgramModel NgramModel::train(const std::vector<std::vector<std::string>>& sequences,
                             const NgramConfig& config) {
  validate_config(config);
  NgramModel m;
  m.order_ = config.order;
  m.add_k_ = config.add_k;
  m.vocab_ = {std::string(kUnknown), std::string(kStart)};
  m.ids_ = {{std::string(kUnknown), 0u}, {std::string(kStart), 1u}};
  for (const auto& seq : sequences) {
    for (const auto& t : seq) {
      if (t == kStart || t == kUnknown) continue;
      if (m.ids_.emplace(t, static_cast<std::uint32_t>(m.vocab_.size())).second) {
        m.vocab_.push_back(t);
      }
    }
  }

  const auto n = static_cast<std::size_t>(config.order);
  if (!config.lambdas.empty()) {
    m.lambdas_ = config.lambdas;
  } else {
    m.lambdas_.assign(n, 1.0 / static_cast<double>(n));
    if (config.tune_lambdas && n > 1 && sequences.size() >= 2) {
      // Deleted interpolation: count on the training split, EM on held out.
      std::vector<std::vector<std::string>> train_split;
      std::vector<const std::vector<std::string>*> heldout;
      const auto every = static_cast<std::size_t>(config.heldout_every);
      for (std::size_t i = 0; i < sequences.size(); ++i) {
        if (i % every == every - 1 || (sequences.size() < every && i + 1 == sequences.size())) {
          heldout.push_back(&sequences[i]);
        } else {
          train_split.push_back(sequences[i]);
        }
      }
      m.count(train_split);
      std::vector<std::vector<double>> per_order;
      for (const auto* seq : heldout) {
        const auto ids = m.padded_ids(*seq);
        for (std::size_t pos = n - 1; pos < ids.size(); ++pos) {
          std::span<const std::uint32_t> hist(ids.data(), pos);
          std::vector<double> ps(n);
          for (std::size_t j = 1; j <= n; ++j) ps[j - 1] = m.order_probability(j, hist, ids[pos]);
          per_order.push_back(std::move(ps));
        }
      }
      for (int it = 0; it < config.em_iterations && !per_order.empty(); ++it) {
        std::vector<double> acc(n, 0.0);
        std::size_t used = 0;
        for (const auto& ps : per_order) {
          double p = 0.0;
          for (std::size_t j = 0; j < n; ++j) p += m.lambdas_[j] * ps[j];
          if (!(p > 0.0)) continue;
          ++used;
          for (std::size_t j = 0; j < n; ++j) acc[j] += m.lambdas_[j] * ps[j] / p;
        }
        if (used == 0) break;
        for (std::size_t j = 0; j < n; ++j) m.lambdas_[j] = acc[j] / static_cast<double>(used);
      }
    }
  }
  m.count(sequences);
  return m;
}

// ---------------------------------------------------------------------------
// Binary model file. Little-endian, fixed layout:
//   "RHNGRAM\n" u32 version u32 order f64 add_k f64[order] lambdas
//   u64 provenance u32 vocab (u32 len, bytes)*
//   per order j: u64 contexts, each: u32[j-1] key, u64 total, u32 n,
//                (u32 id, u64 count)*   -- all sorted ascending

namespace {

constexpr char kMagic[8] = {'R', 'H', 'N', 'G', 'R', 'A', 'M', '\n'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw ParseError("model file: truncated");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void NgramModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(order_));
  put<double>(out, add_k_);
  for (double l : lambdas_) put<double>(out, l);
  put<std::uint64_t>(out, provenance_);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(vocab_.size()));
  for (const auto& t : vocab_) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.size()));
    out.write(t.data(), static_cast<std::streamsize>(t.size()));
  }
  for (const auto& table : tables_) {
    std::vector<const Table::value_type*> entries;
    entries.reserve(table.size());
    for (const auto& e : table) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    put<std::uint64_t>(out, entries.size());
    for (const auto* e : entries) {
      for (std::uint32_t id : e->first) put<std::uint32_t>(out, id);
      put<std::uint64_t>(out, e->second.total);
      std::vector<std::pair<std::uint32_t, std::uint64_t>> next(e->second.next.begin(),
                                                                e->second.next.end());
      std::sort(next.begin(), next.end());
      put<std::uint32_t>(out, static_cast<std::uint32_t>(next.size()));
      for (const auto& [id, c] : next) {
        put<std::uint32_t>(out, id);
        put<std::uint64_t>(out, c);
      }
    }
  }
  if (!out) throw Error("model file: write failed");
}

NgramModel NgramModel::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("model file: bad magic header");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw ParseError(fmt::format("model file: unsupported version {}", version));
  NgramModel m;
  m.order_ = static_cast<int>(get<std::uint32_t>(in));
  if (m.order_ < 1 || m.order_ > 64) throw ParseError("model file: bad order");
  m.add_k_ = get<double>(in);
  double sum = 0.0;
  for (int j = 0; j < m.order_; ++j) {
    m.lambdas_.push_back(get<double>(in));
    sum += m.lambdas_.back();
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ParseError("model file: weights do not sum to 1");
  m.provenance_ = get<std::uint64_t>(in);
  const auto vsize = get<std::uint32_t>(in);
  if (vsize < 2) throw ParseError("model file: vocabulary too small");
  for (std::uint32_t i = 0; i < vsize; ++i) {
    const auto len = get<std::uint32_t>(in);
    std::string t(len, '\0');
    if (!in.read(t.data(), len)) throw ParseError("model file: truncated");
    m.ids_.emplace(t, i);
    m.vocab_.push_back(std::move(t));
  }
  m.tables_.assign(static_cast<std::size_t>(m.order_), Table{});
  for (int j = 1; j <= m.order_; ++j) {
    const auto n_ctx = get<std::uint64_t>(in);
    auto& table = m.tables_[static_cast<std::size_t>(j - 1)];
    for (std::uint64_t c = 0; c < n_ctx; ++c) {
      std::vector<std::uint32_t> key(static_cast<std::size_t>(j - 1));
      for (auto& id : key) {
        id = get<std::uint32_t>(in);
        if (id >= vsize) throw ParseError("model file: id out of range");
      }
      Context ctx;
      ctx.total = get<std::uint64_t>(in);
      const auto n_next = get<std::uint32_t>(in);
      for (std::uint32_t k = 0; k < n_next; ++k) {
        const auto id = get<std::uint32_t>(in);
        if (id >= vsize) throw ParseError("model file: id out of range");
        ctx.next.emplace(id, get<std::uint64_t>(in));
      }
      table.emplace(std::move(key), std::move(ctx));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

std::string speaker_prompt(const Speaker& s) { return s.display_name + ":"; }

std::vector<std::vector<std::string>> training_sequences(const Corpus& corpus) {
  std::vector<std::vector<std::string>> out;
  for (const auto& d : corpus.documents()) {
    std::vector<std::string> seq;
    for (std::size_t i : corpus.document_sentences(d.id)) {
      const auto& s = corpus.sentences()[i];
      for (auto& t : lm_tokenize(speaker_prompt(corpus.speaker(s.speaker_id)))) {
        seq.push_back(std::move(t));
      }
      for (auto& t : lm_tokenize(s.masked_text)) seq.push_back(std::move(t));
    }
    if (!seq.empty()) out.push_back(std::move(seq));
  }
  return out;
}

NgramModel train_ngram(const Corpus& corpus, int order, const NgramConfig& config) {
  if (order < 1) throw Error(fmt::format("n-gram order must be at least 1, got {}", order));
  if (corpus.sentences().empty()) throw Error("cannot train on an empty corpus");
  NgramConfig c = config;
  c.order = order;
  return NgramModel::train(training_sequences(corpus), c);
}

NgramBackend::NgramBackend(std::shared_ptr<const NgramModel> model) : model_(std::move(model)) {
  if (!model_) throw Error("n-gram backend needs a model");
}

TokenLossSequence NgramBackend::token_losses(const ScoringRequest& req) const {
  req.validate();
  std::vector<std::string> history = lm_tokenize(req.context);
  for (auto& t : lm_tokenize(req.speaker_prompt)) history.push_back(std::move(t));
  TokenLossSequence out;
  out.tokens = lm_tokenize(req.target);
  out.losses_bits = model_->losses(history, out.tokens);
  return out;
}

TokenLossSequence token_losses(const LossBackend& backend, const ScoringRequest& req) {
  req.validate();
  auto out = backend.token_losses(req);
  if (out.tokens.size() != out.losses_bits.size()) {
    throw ProtocolError("backend returned mismatched token and loss counts");
  }
  for (double l : out.losses_bits) {
    if (!std::isfinite(l) || l < 0.0) throw ProtocolError("backend returned an invalid loss");
  }
  return out;
}

double bpc(const ScoringRequest& req, const TokenLossSequence& losses) {
  const std::string& source = req.raw_target.empty() ? req.target : req.raw_target;
  const std::size_t chars = text::utf8_length(source);
  if (chars == 0) throw Error("bpc of a zero-length target");
  return losses.total_bits() / static_cast<double>(chars);
}

std::string truncate_context(std::string_view context, int window_tokens) {
  if (window_tokens <= 0) return {};
  auto tokens = text::tokenize_with_offsets(context);
  if (tokens.empty()) return {};
  const std::size_t keep = std::min(tokens.size(), static_cast<std::size_t>(window_tokens));
  const auto& first = tokens[tokens.size() - keep];
  return std::string(context.substr(first.begin, tokens.back().end - first.begin));
}

ScoringRequest make_request(const Corpus& corpus, std::size_t index,
                            std::string_view prompt_speaker, int window_tokens) {
  const Sentence& s = corpus.sentences().at(index);
  std::string context;
  for (std::size_t i : corpus.document_sentences(s.doc_id)) {
    if (i == index) break;
    const auto& prev = corpus.sentences()[i];
    if (!context.empty()) context.push_back('\n');
    context += speaker_prompt(corpus.speaker(prev.speaker_id));
    context.push_back(' ');
    context += prev.masked_text;
  }
  ScoringRequest req;
  req.speaker_prompt = speaker_prompt(corpus.speaker(prompt_speaker));
  req.context = truncate_context(context, window_tokens);
  req.target = s.masked_text;
  req.raw_target = s.raw_text;
  return req;
}

}  // namespace rhetoric
