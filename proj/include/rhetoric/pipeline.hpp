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

#ifndef RHETORIC_PIPELINE_HPP_
#define RHETORIC_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhetoric/common.hpp"

namespace rhetoric {

// Invalid configuration; the message lists every offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A stage could not run. `stage` names the command that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct GenreInputs {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> rules;
  std::optional<std::filesystem::path> reviews;
  // Explicit pool; defaults to every D or R speaker.
  std::optional<std::vector<std::string>> pool;
};

struct BackendConfig {
  std::string kind = "ngram";  // ngram | remote | uniform
  int order = 3;
  double add_k = 0.01;
  std::vector<double> lambdas;  // empty: tuned on held-out data
  int window = 512;
  std::string server_url;
  int max_in_flight = 8;
  int retries = 3;
  int timeout_ms = 30000;
  int uniform_vocab = 10000;
};

struct CampaignWindow {
  int window_days = 30;
  int min_cycle_year = 2008;
};

struct LexiconConfig {
  std::optional<std::filesystem::path> path;  // bundled lexicon when absent
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> annotations;
  int expand_k = 20;
  std::string aggregation = "max";  // max | mean
};

struct FwConfig {
  double prior_scale = 500.0;
  int top_n = 25;
  std::string filter = "adjectives";  // adjectives | all
  bool include_possible = false;
};

struct ReportConfig {
  std::string focus_speaker = "Donald Trump";
  std::string ci = "normal";  // normal | bootstrap
  int bootstrap_samples = 1000;
  int length_bin_width = 5;
  int length_max = 50;
  int top_terms = 10;
};

struct RunConfig {
  std::map<Genre, GenreInputs> genres;
  std::optional<CampaignWindow> campaign_window;
  BackendConfig backend;
  LexiconConfig lexicon;
  FwConfig fw;
  ReportConfig report;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  int workers = 1;

  // Relative paths resolve against `base_dir`. Unknown keys are errors.
  static RunConfig parse(std::string_view json_text, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  // Throws ConfigError naming every invalid field.
  void validate() const;

  // Canonical JSON of the full configuration.
  std::string to_json() const;
  // FNV-1a of the canonical JSON without output_dir and workers, which do
  // not change any artifact.
  std::string hash() const;
};

// Applies RHETORIC_SERVER when set.
void apply_environment(RunConfig& config);

struct StageSummary {
  std::vector<std::filesystem::path> written;
};

StageSummary run_ingest(const RunConfig& config);
StageSummary run_tag(const RunConfig& config);
StageSummary run_train(const RunConfig& config);
StageSummary run_score(const RunConfig& config);
StageSummary run_lexicon(const RunConfig& config, std::string_view action);
StageSummary run_fw(const RunConfig& config);
StageSummary run_report(const RunConfig& config);
// ingest, tag, train, score, fw, report.
StageSummary run_all(const RunConfig& config);

}  // namespace rhetoric

#endif  // RHETORIC_PIPELINE_HPP_
