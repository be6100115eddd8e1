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

// Command-line front end: one subcommand per pipeline stage.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "rhetoric/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> output_dir;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend;
  std::optional<std::string> server;
  std::optional<int> window;
  std::optional<int> order;
  std::optional<double> prior_scale;
  std::optional<int> top_n;
  std::optional<std::string> ci;
};

rhetoric::RunConfig resolve(const Overrides& o) {
  auto c = rhetoric::RunConfig::load(o.config);
  rhetoric::apply_environment(c);
  if (o.output_dir) c.output_dir = std::filesystem::absolute(*o.output_dir).lexically_normal();
  if (o.workers) c.workers = *o.workers;
  if (o.seed) c.seed = *o.seed;
  if (o.backend) c.backend.kind = *o.backend;
  if (o.server) c.backend.server_url = *o.server;
  if (o.window) c.backend.window = *o.window;
  if (o.order) c.backend.order = *o.order;
  if (o.prior_scale) c.fw.prior_scale = *o.prior_scale;
  if (o.top_n) c.fw.top_n = *o.top_n;
  if (o.ci) c.report.ci = *o.ci;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniqueness, divisiveness and opponent-overlap analytics for political speech"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("-c,--config", o.config, "Run configuration (JSON)")->required();
  app.add_option("-o,--output-dir", o.output_dir, "Artifact directory");
  app.add_option("-j,--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for randomized steps");
  app.add_option("--backend", o.backend, "ngram, remote or uniform");
  app.add_option("--server", o.server, "Loss-server URL (overrides RHETORIC_SERVER)");
  app.add_option("--window", o.window, "Context window in tokens");
  app.add_option("--order", o.order, "n-gram order");
  app.add_option("--prior-scale", o.prior_scale, "Fightin' Words prior scale");
  app.add_option("--top-n", o.top_n, "Fightin' Words top-n size");
  app.add_option("--ci", o.ci, "normal or bootstrap");

  std::string lexicon_action;
  auto* ingest = app.add_subcommand("ingest", "Read transcripts into sentence corpora");
  auto* tag = app.add_subcommand("tag", "Label opponent mentions");
  auto* train = app.add_subcommand("train", "Train the n-gram backend");
  auto* score = app.add_subcommand("score", "Score sentence uniqueness");
  auto* lexicon = app.add_subcommand("lexicon", "Divisive lexicon tools");
  lexicon->add_option("action", lexicon_action, "expand, vote or freq")
      ->required()
      ->check(CLI::IsMember({"expand", "vote", "freq"}));
  auto* fw = app.add_subcommand("fw", "Fightin' Words and overlap metric");
  auto* report = app.add_subcommand("report", "Write per-figure CSV tables");
  auto* run = app.add_subcommand("run", "Run every stage in order");
  auto* show = app.add_subcommand("config", "Print the resolved configuration and its hash");

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    const auto config = resolve(o);
    if (show->parsed()) {
      std::cout << config.to_json() << '\n' << "hash " << config.hash() << '\n';
    } else if (ingest->parsed()) {
      rhetoric::run_ingest(config);
    } else if (tag->parsed()) {
      rhetoric::run_tag(config);
    } else if (train->parsed()) {
      rhetoric::run_train(config);
    } else if (score->parsed()) {
      rhetoric::run_score(config);
    } else if (lexicon->parsed()) {
      rhetoric::run_lexicon(config, lexicon_action);
    } else if (fw->parsed()) {
      rhetoric::run_fw(config);
    } else if (report->parsed()) {
      rhetoric::run_report(config);
    } else if (run->parsed()) {
      rhetoric::run_all(config);
    }
  } catch (const rhetoric::StageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  } catch (const rhetoric::ConfigError& e) {
    fmt::print(stderr, "error [{}]: {}\n", stage, e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error [{}]: {}\n", stage, e.what());
    return 1;
  }
  return 0;
}
