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

#ifndef RHETORIC_LM_HPP_
#define RHETORIC_LM_HPP_

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rhetoric/corpus.hpp"

namespace rhetoric {

inline constexpr int kDefaultWindowTokens = 512;

struct ScoringRequest {
  std::string speaker_prompt;  // "Donald Trump:"
  std::string context;         // preceding text, already windowed
  std::string target;          // text whose tokens are scored
  // Source of the character count for bpc(); empty means `target`. Lets the
  // masked sentence be scored while lengths come from the raw sentence.
  std::string raw_target;

  void validate() const;
};

struct TokenLossSequence {
  std::vector<std::string> tokens;
  std::vector<double> losses_bits;

  double total_bits() const;
};

// Any source of per-token losses. Implementations must be callable from
// several threads at once.
class LossBackend {
 public:
  virtual ~LossBackend() = default;
  virtual TokenLossSequence token_losses(const ScoringRequest& req) const = 0;
};

// Word-level tokens for the built-in backends: lowercased word runs, each
// punctuation mark on its own, the mask token kept whole.
std::vector<std::string> lm_tokenize(std::string_view text);

// Every token costs log2(vocab_size) bits.
class UniformBackend final : public LossBackend {
 public:
  explicit UniformBackend(std::size_t vocab_size);
  TokenLossSequence token_losses(const ScoringRequest& req) const override;

 private:
  double bits_;
};

struct NgramConfig {
  int order = 3;
  double add_k = 0.01;
  // Interpolation weights for orders 1..order. Empty means tune them on a
  // held-out split (or uniform when tuning is off).
  std::vector<double> lambdas;
  bool tune_lambdas = true;
  // Every n-th training sequence is held out while tuning.
  int heldout_every = 10;
  int em_iterations = 50;
};

// Interpolated add-k word n-gram model:
//   P(w | h) = sum_j lambda_j * (c(h_j, w) + k) / (c(h_j) + k * |V|)
// where h_j is the last j-1 words of h and V excludes the start symbol.
class NgramModel {
 public:
  static constexpr std::string_view kUnknown = "<unk>";
  static constexpr std::string_view kStart = "<s>";

  static NgramModel train(const std::vector<std::vector<std::string>>& sequences,
                          const NgramConfig& config);

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  // Predictable vocabulary size, <unk> included.
  std::size_t vocabulary_size() const { return vocab_.size() - 1; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  // `history` is everything before `word`; it is left-padded with <s>.
  double probability(std::span<const std::string> history, std::string_view word) const;

  // Losses in bits for each target token given the preceding tokens.
  std::vector<double> losses(std::span<const std::string> history,
                             std::span<const std::string> targets) const;

  std::uint64_t provenance() const { return provenance_; }
  void set_provenance(std::uint64_t hash) { provenance_ = hash; }

  void save(std::ostream& out) const;
  static NgramModel load(std::istream& in);

 private:
  struct Context {
    std::uint64_t total = 0;
    std::unordered_map<std::uint32_t, std::uint64_t> next;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const noexcept;
  };
  using Table = std::unordered_map<std::vector<std::uint32_t>, Context, KeyHash>;

  std::uint32_t id_of(std::string_view token) const;
  double probability_ids(std::span<const std::uint32_t> padded_history, std::uint32_t w) const;
  double order_probability(std::size_t j, std::span<const std::uint32_t> padded_history,
                           std::uint32_t w) const;
  void count(const std::vector<std::vector<std::string>>& sequences);
  std::vector<std::uint32_t> padded_ids(std::span<const std::string> tokens) const;

  int order_ = 1;
  double add_k_ = 0.0;
  std::vector<double> lambdas_;
  std::uint64_t provenance_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<Table> tables_;  // tables_[j-1] holds histories of length j-1
};

// Document streams of "<speaker>: <masked sentence>" used for training.
std::vector<std::vector<std::string>> training_sequences(const Corpus& corpus);

NgramModel train_ngram(const Corpus& corpus, int order, const NgramConfig& config = {});

class NgramBackend final : public LossBackend {
 public:
  explicit NgramBackend(std::shared_ptr<const NgramModel> model);
  TokenLossSequence token_losses(const ScoringRequest& req) const override;
  const NgramModel& model() const { return *model_; }

 private:
  std::shared_ptr<const NgramModel> model_;
};

struct RemoteOptions {
  std::string url;  // "http://host:port"
  int max_in_flight = 8;
  int retries = 3;
  int timeout_ms = 30000;
  int backoff_ms = 100;
};

// Client for the loss-server protocol:
//   POST /v1/token_losses {"prompt", "context", "target"}
//   -> {"tokens": [...], "losses": [...], "base": "e" | "2"}
class RemoteBackend final : public LossBackend {
 public:
  explicit RemoteBackend(RemoteOptions options);
  ~RemoteBackend() override;
  TokenLossSequence token_losses(const ScoringRequest& req) const override;

  // Total retries performed so far, across threads.
  std::size_t retry_count() const { return retries_.load(); }

 private:
  struct Limiter;
  RemoteOptions options_;
  std::unique_ptr<Limiter> limiter_;
  mutable std::atomic<std::size_t> retries_{0};
};

// Parses a loss-server reply and converts losses to bits.
TokenLossSequence parse_loss_reply(std::string_view body);

TokenLossSequence token_losses(const LossBackend& backend, const ScoringRequest& req);

// Sum of bits over the character count of the raw target.
double bpc(const ScoringRequest& req, const TokenLossSequence& losses);

// Request scoring sentence `index` of `corpus` under `prompt_speaker`'s
// prompt. Context is the preceding sentences of the same document as
// "<speaker>: <masked>" lines, cut to the last `window_tokens` whitespace
// tokens. The prompt does not count toward the window.
ScoringRequest make_request(const Corpus& corpus, std::size_t index,
                            std::string_view prompt_speaker,
                            int window_tokens = kDefaultWindowTokens);

std::string speaker_prompt(const Speaker& s);

// Keeps the last `window_tokens` whitespace-delimited tokens.
std::string truncate_context(std::string_view context, int window_tokens);

}  // namespace rhetoric

#endif  // RHETORIC_LM_HPP_
