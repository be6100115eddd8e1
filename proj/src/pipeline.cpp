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

#include "rhetoric/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "rhetoric/analysis.hpp"
#include "rhetoric/corpus.hpp"
#include "rhetoric/csv.hpp"
#include "rhetoric/fightin_words.hpp"
#include "rhetoric/lexicon.hpp"
#include "rhetoric/lm.hpp"
#include "rhetoric/opponent_tagging.hpp"
#include "rhetoric/uniqueness.hpp"

namespace rhetoric {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

// Collects field errors so validation can report all of them at once.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(prefix_.empty() ? "<root>" : prefix_);
  }

  // Null stands for an absent optional, as written by to_json().
  bool present(const char* key) const {
    return obj_.is_object() && obj_.contains(key) && !obj_.at(key).is_null();
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!present(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(name(key));
    }
  }

  void path(const char* key, fs::path& out, const fs::path& base) {
    std::string s;
    const bool had = present(key);
    get(key, s);
    if (had && !s.empty()) out = resolve(s, base);
  }

  void path(const char* key, std::optional<fs::path>& out, const fs::path& base) {
    std::string s;
    const bool had = present(key);
    get(key, s);
    if (had) out = resolve(s, base);
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!present(key)) return nullptr;
    return &obj_.at(key);
  }

  std::string name(std::string_view key) const {
    return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
  }

  // Unknown keys are errors; a typo should not silently select a default.
  void finish() {
    if (!obj_.is_object()) return;
    for (const auto& [k, _] : obj_.items()) {
      if (!seen_.count(k)) errors_.push_back(name(k) + " (unknown key)");
    }
  }

  static fs::path resolve(const std::string& s, const fs::path& base) {
    fs::path p(s);
    if (p.is_relative()) p = base / p;
    return p.lexically_normal();
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

json path_json(const std::optional<fs::path>& p) {
  return p ? json(p->generic_string()) : json(nullptr);
}

json canonical(const RunConfig& c, bool for_hash) {
  json j;
  json genres = json::object();
  for (const auto& [g, in] : c.genres) {
    json gj;
    gj["corpus"] = in.corpus.generic_string();
    gj["rules"] = path_json(in.rules);
    gj["reviews"] = path_json(in.reviews);
    gj["pool"] = in.pool ? json(*in.pool) : json(nullptr);
    genres[std::string(to_string(g))] = gj;
  }
  j["genres"] = genres;
  if (c.campaign_window) {
    j["campaign_window"] = {{"window_days", c.campaign_window->window_days},
                            {"min_cycle_year", c.campaign_window->min_cycle_year}};
  } else {
    j["campaign_window"] = nullptr;
  }
  const auto& b = c.backend;
  j["backend"] = {{"kind", b.kind},
                  {"order", b.order},
                  {"add_k", b.add_k},
                  {"lambdas", b.lambdas},
                  {"window", b.window},
                  {"server_url", b.server_url},
                  {"max_in_flight", b.max_in_flight},
                  {"retries", b.retries},
                  {"timeout_ms", b.timeout_ms},
                  {"uniform_vocab", b.uniform_vocab}};
  const auto& l = c.lexicon;
  j["lexicon"] = {{"path", path_json(l.path)},
                  {"embeddings", path_json(l.embeddings)},
                  {"annotations", path_json(l.annotations)},
                  {"expand_k", l.expand_k},
                  {"aggregation", l.aggregation}};
  j["fw"] = {{"prior_scale", c.fw.prior_scale},
             {"top_n", c.fw.top_n},
             {"filter", c.fw.filter},
             {"include_possible", c.fw.include_possible}};
  const auto& r = c.report;
  j["report"] = {{"focus_speaker", r.focus_speaker},
                 {"ci", r.ci},
                 {"bootstrap_samples", r.bootstrap_samples},
                 {"length_bin_width", r.length_bin_width},
                 {"length_max", r.length_max},
                 {"top_terms", r.top_terms}};
  j["seed"] = c.seed;
  if (!for_hash) {
    j["output_dir"] = c.output_dir.generic_string();
    j["workers"] = c.workers;
  }
  return j;
}

std::uint64_t hash_value(const RunConfig& c) { return fnv1a64(canonical(c, true).dump()); }

}  // namespace

RunConfig RunConfig::parse(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  const fs::path base = fs::absolute(base_dir);
  std::vector<std::string> errors;
  RunConfig c;
  FieldReader top(root, "", errors);

  if (const json* g = top.child("genres")) {
    if (!g->is_object()) {
      errors.push_back("genres");
    } else {
      for (const auto& [name, val] : g->items()) {
        Genre genre;
        try {
          genre = parse_genre(name);
        } catch (const Error&) {
          errors.push_back("genres." + name + " (unknown genre)");
          continue;
        }
        GenreInputs in;
        FieldReader r(val, "genres." + name, errors);
        r.path("corpus", in.corpus, base);
        r.path("rules", in.rules, base);
        r.path("reviews", in.reviews, base);
        std::vector<std::string> pool;
        const bool has_pool = r.present("pool");
        r.get("pool", pool);
        if (has_pool) in.pool = pool;
        r.finish();
        c.genres[genre] = std::move(in);
      }
    }
  }
  if (const json* w = top.child("campaign_window")) {
    CampaignWindow cw;
    FieldReader r(*w, "campaign_window", errors);
    r.get("window_days", cw.window_days);
    r.get("min_cycle_year", cw.min_cycle_year);
    r.finish();
    c.campaign_window = cw;
  }
  if (const json* b = top.child("backend")) {
    FieldReader r(*b, "backend", errors);
    r.get("kind", c.backend.kind);
    r.get("order", c.backend.order);
    r.get("add_k", c.backend.add_k);
    r.get("lambdas", c.backend.lambdas);
    r.get("window", c.backend.window);
    r.get("server_url", c.backend.server_url);
    r.get("max_in_flight", c.backend.max_in_flight);
    r.get("retries", c.backend.retries);
    r.get("timeout_ms", c.backend.timeout_ms);
    r.get("uniform_vocab", c.backend.uniform_vocab);
    r.finish();
  }
  if (const json* l = top.child("lexicon")) {
    FieldReader r(*l, "lexicon", errors);
    r.path("path", c.lexicon.path, base);
    r.path("embeddings", c.lexicon.embeddings, base);
    r.path("annotations", c.lexicon.annotations, base);
    r.get("expand_k", c.lexicon.expand_k);
    r.get("aggregation", c.lexicon.aggregation);
    r.finish();
  }
  if (const json* f = top.child("fw")) {
    FieldReader r(*f, "fw", errors);
    r.get("prior_scale", c.fw.prior_scale);
    r.get("top_n", c.fw.top_n);
    r.get("filter", c.fw.filter);
    r.get("include_possible", c.fw.include_possible);
    r.finish();
  }
  if (const json* rep = top.child("report")) {
    FieldReader r(*rep, "report", errors);
    r.get("focus_speaker", c.report.focus_speaker);
    r.get("ci", c.report.ci);
    r.get("bootstrap_samples", c.report.bootstrap_samples);
    r.get("length_bin_width", c.report.length_bin_width);
    r.get("length_max", c.report.length_max);
    r.get("top_terms", c.report.top_terms);
    r.finish();
  }
  top.path("output_dir", c.output_dir, base);
  if (!root.is_object() || !root.contains("output_dir")) c.output_dir = base / "out";
  top.get("seed", c.seed);
  top.get("workers", c.workers);
  top.finish();

  if (!errors.empty()) throw ConfigError("invalid config fields: " + join(errors, ", "));
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), fs::absolute(path).parent_path());
}

void RunConfig::validate() const {
  std::vector<std::string> bad;
  if (genres.empty()) bad.push_back("genres (none configured)");
  for (const auto& [g, in] : genres) {
    const std::string p = fmt::format("genres.{}", to_string(g));
    if (in.corpus.empty()) bad.push_back(p + ".corpus");
    if (in.pool && in.pool->size() < 2) bad.push_back(p + ".pool (needs two or more speakers)");
  }
  if (campaign_window) {
    if (campaign_window->window_days < 0) bad.push_back("campaign_window.window_days");
    if (!genres.count(Genre::kCampaign)) bad.push_back("campaign_window (no campaign genre)");
  }
  if (backend.kind != "ngram" && backend.kind != "remote" && backend.kind != "uniform") {
    bad.push_back("backend.kind");
  }
  if (backend.order < 1) bad.push_back("backend.order");
  if (!(backend.add_k > 0.0)) bad.push_back("backend.add_k");
  if (!backend.lambdas.empty()) {
    double sum = 0.0;
    bool neg = false;
    for (double l : backend.lambdas) {
      sum += l;
      neg = neg || !(l >= 0.0);
    }
    if (neg || backend.lambdas.size() != static_cast<std::size_t>(backend.order) ||
        std::abs(sum - 1.0) > 1e-9) {
      bad.push_back("backend.lambdas (one weight per order, summing to 1)");
    }
  }
  if (backend.window < 1) bad.push_back("backend.window");
  if (backend.kind == "remote" && backend.server_url.empty()) bad.push_back("backend.server_url");
  if (backend.max_in_flight < 1 || backend.max_in_flight > 1024) bad.push_back("backend.max_in_flight");
  if (backend.retries < 0) bad.push_back("backend.retries");
  if (backend.timeout_ms < 1) bad.push_back("backend.timeout_ms");
  if (backend.uniform_vocab < 1) bad.push_back("backend.uniform_vocab");
  if (lexicon.expand_k < 1) bad.push_back("lexicon.expand_k");
  if (lexicon.aggregation != "max" && lexicon.aggregation != "mean") bad.push_back("lexicon.aggregation");
  if (!(fw.prior_scale > 0.0)) bad.push_back("fw.prior_scale");
  if (fw.top_n < 1) bad.push_back("fw.top_n");
  if (fw.filter != "adjectives" && fw.filter != "all") bad.push_back("fw.filter");
  if (report.ci != "normal" && report.ci != "bootstrap") bad.push_back("report.ci");
  if (report.bootstrap_samples < 1) bad.push_back("report.bootstrap_samples");
  if (report.length_bin_width < 1) bad.push_back("report.length_bin_width");
  if (report.length_max < report.length_bin_width) bad.push_back("report.length_max");
  if (report.top_terms < 1) bad.push_back("report.top_terms");
  if (workers < 1) bad.push_back("workers");
  if (output_dir.empty()) bad.push_back("output_dir");
  if (!bad.empty()) throw ConfigError("invalid config fields: " + join(bad, ", "));
}

std::string RunConfig::to_json() const { return canonical(*this, false).dump(2); }

std::string RunConfig::hash() const { return hex64(hash_value(*this)); }

void apply_environment(RunConfig& config) {
  if (const char* url = std::getenv("RHETORIC_SERVER"); url && *url) {
    config.backend.server_url = url;
  }
}

// ---------------------------------------------------------------------------
// Artifacts

namespace {

std::string genre_name(Genre g) { return std::string(to_string(g)); }

fs::path corpus_file(const RunConfig& c, Genre g) {
  return c.output_dir / "corpus" / (genre_name(g) + ".jsonl");
}
fs::path tagged_file(const RunConfig& c, Genre g) {
  return c.output_dir / "tagged" / (genre_name(g) + ".jsonl");
}
fs::path model_file(const RunConfig& c, Genre g) {
  return c.output_dir / "models" / (genre_name(g) + ".bin");
}
fs::path scores_file(const RunConfig& c, Genre g) {
  return c.output_dir / "scores" / (genre_name(g) + ".jsonl");
}

std::string meta_for(const RunConfig& c, std::string_view stage, Genre g) {
  return json{{"config_hash", c.hash()}, {"stage", stage}, {"genre", to_string(g)}}.dump();
}

void log(std::string_view stage, const std::string& msg) {
  fmt::print(stderr, "[{}] {}\n", stage, msg);
}

void require(std::string_view stage, const fs::path& p, std::string_view producer) {
  if (!fs::exists(p)) {
    throw StageError(std::string(stage),
                     fmt::format("missing prerequisite '{}'; run `rhetoric {}` first",
                                 p.generic_string(), producer));
  }
}

void check_hash(std::string_view stage, const RunConfig& c, const fs::path& p,
                const std::optional<std::string>& meta) {
  std::string found = "<none>";
  if (meta) {
    try {
      const json m = json::parse(*meta);
      if (m.contains("config_hash") && m["config_hash"].is_string()) {
        found = m["config_hash"].get<std::string>();
      }
    } catch (const json::exception&) {
    }
  }
  if (found != c.hash()) {
    throw StageError(std::string(stage),
                     fmt::format("'{}' was written under config hash {} but the current config "
                                 "hash is {}; rerun the earlier stages",
                                 p.generic_string(), found, c.hash()));
  }
}

// Writes to a temporary sibling, then renames, so a failed stage never
// leaves a truncated artifact behind.
class AtomicFile {
 public:
  explicit AtomicFile(fs::path path, bool binary = false) : path_(std::move(path)) {
    fs::create_directories(path_.parent_path());
    tmp_ = path_;
    tmp_ += ".tmp";
    out_.open(tmp_, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out_) throw Error(fmt::format("cannot write '{}'", tmp_.generic_string()));
  }
  std::ostream& stream() { return out_; }
  fs::path commit() {
    out_.close();
    if (!out_) throw Error(fmt::format("write failed for '{}'", tmp_.generic_string()));
    fs::rename(tmp_, path_);
    return path_;
  }

 private:
  fs::path path_, tmp_;
  std::ofstream out_;
};

IngestOptions ingest_options(const GenreInputs& in) {
  IngestOptions o;
  o.pool = in.pool;
  return o;
}

Corpus load_stage_corpus(std::string_view stage, const RunConfig& c, Genre g, const fs::path& p,
                         std::string_view producer) {
  require(stage, p, producer);
  auto r = ingest(p, g, ingest_options(c.genres.at(g)));
  check_hash(stage, c, p, r.meta);
  return std::move(r.corpus);
}

MentionPolicy mention_policy(const RunConfig& c, Genre g) {
  MentionPolicy p;
  p.include_possible = c.fw.include_possible;
  if (const auto& rv = c.genres.at(g).reviews) p.confirmed = ReviewFile::load(*rv).confirmed();
  return p;
}

const Lexicon& active_lexicon(const RunConfig& c, std::optional<Lexicon>& storage) {
  if (!c.lexicon.path) return Lexicon::bundled();
  storage = Lexicon::load(*c.lexicon.path);
  return *storage;
}

void write_group_csv(std::ostream& out, std::string_view header,
                     const std::vector<GroupStat>& rows) {
  out << header << ",n,mean,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << csv::row({r.group, std::to_string(r.n), csv::num(r.mean), csv::num(r.ci_low),
                     csv::num(r.ci_high)});
  }
}

void write_frequency_csv(std::ostream& out, const std::vector<DivisiveFrequencyRow>& rows) {
  out << "group,matches,total_words,frequency\n";
  for (const auto& r : rows) {
    out << csv::row({r.group, std::to_string(r.matches), std::to_string(r.total_words),
                     csv::num(r.frequency)});
  }
}

void write_mention_csv(std::ostream& out, const std::vector<MentionRateRow>& rows) {
  out << "group,mentions,total,rate\n";
  for (const auto& r : rows) {
    out << csv::row({r.group, std::to_string(r.mentions), std::to_string(r.total),
                     csv::num(r.rate)});
  }
}

template <typename Fn>
StageSummary for_each_genre(const RunConfig& config, Fn&& fn) {
  config.validate();
  StageSummary s;
  for (const auto& [g, in] : config.genres) fn(g, in, s);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages

StageSummary run_ingest(const RunConfig& config) {
  return for_each_genre(config, [&](Genre g, const GenreInputs& in, StageSummary& s) {
    if (!fs::exists(in.corpus)) {
      throw StageError("ingest", fmt::format("corpus file '{}' does not exist",
                                             in.corpus.generic_string()));
    }
    auto r = ingest(in.corpus, g, ingest_options(in));
    Corpus corpus = std::move(r.corpus);
    if (g == Genre::kCampaign && config.campaign_window) {
      std::map<int, Date> days;
      for (const auto& d : corpus.documents()) {
        if (d.election_cycle) days.emplace(*d.election_cycle, us_election_day(*d.election_cycle));
      }
      corpus = filter_campaign_window(corpus, days, config.campaign_window->window_days,
                                      config.campaign_window->min_cycle_year);
    }
    AtomicFile out(corpus_file(config, g));
    emit(corpus, out.stream(), meta_for(config, "ingest", g));
    s.written.push_back(out.commit());
    const auto rep = summarize(corpus);
    log("ingest", fmt::format("{}: {} documents, {} sentences, {} speakers", genre_name(g),
                              rep.documents, rep.sentences, rep.per_speaker.size()));
  });
}

StageSummary run_tag(const RunConfig& config) {
  return for_each_genre(config, [&](Genre g, const GenreInputs& in, StageSummary& s) {
    const Corpus corpus = load_stage_corpus("tag", config, g, corpus_file(config, g), "ingest");
    if (!in.rules) {
      throw StageError("tag", fmt::format("genres.{}.rules is not set", genre_name(g)));
    }
    const Corpus tagged = tag_mentions(corpus, MentionRuleSet::load(*in.rules));
    AtomicFile out(tagged_file(config, g));
    emit(tagged, out.stream(), meta_for(config, "tag", g));
    s.written.push_back(out.commit());
    AtomicFile queue(config.output_dir / "tagged" / (genre_name(g) + "_review_queue.csv"));
    write_review_queue(tagged, queue.stream());
    s.written.push_back(queue.commit());
    const auto rates = mention_rate(tagged, MentionGroup::kGenre);
    if (!rates.empty()) {
      log("tag", fmt::format("{}: definite mention rate {:.4f}", genre_name(g), rates[0].rate));
    }
  });
}

StageSummary run_train(const RunConfig& config) {
  if (config.backend.kind != "ngram") {
    config.validate();
    log("train", fmt::format("backend '{}' needs no training", config.backend.kind));
    return {};
  }
  return for_each_genre(config, [&](Genre g, const GenreInputs&, StageSummary& s) {
    const Corpus corpus = load_stage_corpus("train", config, g, corpus_file(config, g), "ingest");
    NgramConfig nc;
    nc.order = config.backend.order;
    nc.add_k = config.backend.add_k;
    nc.lambdas = config.backend.lambdas;
    nc.tune_lambdas = config.backend.lambdas.empty();
    NgramModel model = train_ngram(corpus, config.backend.order, nc);
    model.set_provenance(hash_value(config));
    AtomicFile out(model_file(config, g), true);
    model.save(out.stream());
    s.written.push_back(out.commit());
    std::vector<std::string> ls;
    for (double l : model.lambdas()) ls.push_back(fmt::format("{:.4f}", l));
    log("train", fmt::format("{}: vocabulary {}, lambdas [{}]", genre_name(g),
                             model.vocabulary_size(), join(ls, ", ")));
  });
}

StageSummary run_score(const RunConfig& config) {
  return for_each_genre(config, [&](Genre g, const GenreInputs&, StageSummary& s) {
    const Corpus corpus = load_stage_corpus("score", config, g, tagged_file(config, g), "tag");
    std::unique_ptr<LossBackend> backend;
    RemoteBackend* remote = nullptr;
    const auto& b = config.backend;
    if (b.kind == "ngram") {
      const fs::path mp = model_file(config, g);
      require("score", mp, "train");
      std::ifstream in(mp, std::ios::binary);
      auto model = std::make_shared<const NgramModel>(NgramModel::load(in));
      if (model->provenance() != hash_value(config)) {
        throw StageError("score", fmt::format("model '{}' was trained under config hash {} but "
                                              "the current config hash is {}; rerun train",
                                              mp.generic_string(), hex64(model->provenance()),
                                              config.hash()));
      }
      backend = std::make_unique<NgramBackend>(std::move(model));
    } else if (b.kind == "remote") {
      RemoteOptions ro;
      ro.url = b.server_url;
      ro.max_in_flight = b.max_in_flight;
      ro.retries = b.retries;
      ro.timeout_ms = b.timeout_ms;
      auto rb = std::make_unique<RemoteBackend>(ro);
      remote = rb.get();
      backend = std::move(rb);
    } else {
      backend = std::make_unique<UniformBackend>(static_cast<std::size_t>(b.uniform_vocab));
    }
    const PoolPolicy policy = PoolPolicy::for_corpus(corpus, corpus.pool_speakers());
    ScoringOptions so;
    so.window_tokens = b.window;
    so.workers = config.workers;
    std::vector<UniquenessRecord> records;
    try {
      records = score_corpus(corpus, *backend, policy, so);
    } catch (const Error& e) {
      if (remote) log("score", fmt::format("{} retries before failing", remote->retry_count()));
      throw StageError("score", e.what());
    }
    if (remote) log("score", fmt::format("{} retries", remote->retry_count()));
    AtomicFile out(scores_file(config, g));
    write_records(out.stream(), records, meta_for(config, "score", g));
    s.written.push_back(out.commit());
    log("score", fmt::format("{}: {} sentences scored", genre_name(g), records.size()));
  });
}

StageSummary run_lexicon(const RunConfig& config, std::string_view action) {
  config.validate();
  StageSummary s;
  const fs::path dir = config.output_dir / "lexicon";
  std::optional<Lexicon> storage;
  if (action == "expand") {
    if (!config.lexicon.embeddings) throw StageError("lexicon", "lexicon.embeddings is not set");
    const Lexicon& lex = active_lexicon(config, storage);
    const std::vector<std::string> seeds(lex.seeds().begin(), lex.seeds().end());
    const auto cands = expand_seeds(seeds, EmbeddingTable::load(*config.lexicon.embeddings),
                                    config.lexicon.expand_k,
                                    config.lexicon.aggregation == "mean" ? SeedAggregation::kMean
                                                                         : SeedAggregation::kMax);
    AtomicFile out(dir / "candidates.csv");
    out.stream() << "term,similarity\n";
    for (const auto& c : cands) out.stream() << csv::row({c.term, csv::num(c.similarity)});
    s.written.push_back(out.commit());
  } else if (action == "vote") {
    if (!config.lexicon.annotations) throw StageError("lexicon", "lexicon.annotations is not set");
    const auto m = AnnotationMatrix::load(*config.lexicon.annotations);
    const Lexicon& base = active_lexicon(config, storage);
    std::set<std::string> seeds;
    for (const auto& item : m.items) {
      if (base.seeds().count(item)) seeds.insert(item);
    }
    AtomicFile lex_out(dir / "lexicon.txt");
    aggregate_votes(m, seeds).write(lex_out.stream());
    s.written.push_back(lex_out.commit());
    AtomicFile table(dir / "majority_class.csv");
    table.stream() << "size,percent\n";
    for (const auto& r : majority_class_table(m)) {
      table.stream() << csv::row({std::to_string(r.size), csv::num(r.percent)});
    }
    s.written.push_back(table.commit());
    const auto k = fleiss_kappa(m);
    AtomicFile agree(dir / "agreement.csv");
    agree.stream() << "items,raters,kappa,observed,expected,degenerate\n"
                   << csv::row({std::to_string(m.items.size()), std::to_string(m.raters.size()),
                                csv::num(k.kappa), csv::num(k.observed), csv::num(k.expected),
                                k.degenerate ? "true" : "false"});
    s.written.push_back(agree.commit());
  } else if (action == "freq") {
    const Lexicon& lex = active_lexicon(config, storage);
    for (const auto& [g, in] : config.genres) {
      const Corpus corpus =
          load_stage_corpus("lexicon", config, g, corpus_file(config, g), "ingest");
      const std::pair<const char*, DivisiveGroup> groups[] = {
          {"speaker", DivisiveGroup::kSpeaker},
          {"year", DivisiveGroup::kYear},
          {"term", DivisiveGroup::kTerm}};
      for (const auto& [name, group] : groups) {
        AtomicFile out(dir / fmt::format("{}_divisive_by_{}.csv", genre_name(g), name));
        write_frequency_csv(out.stream(), divisive_frequency(corpus, lex, group));
        s.written.push_back(out.commit());
      }
    }
  } else {
    throw StageError("lexicon",
                     fmt::format("unknown action '{}' (expected expand, vote or freq)", action));
  }
  return s;
}

namespace {

FwOptions fw_options(const RunConfig& config, Genre g) {
  FwOptions o;
  o.prior_scale = config.fw.prior_scale;
  o.filter = config.fw.filter == "all" ? TokenFilter::all_tokens() : TokenFilter{};
  o.mention = mention_policy(config, g);
  o.workers = config.workers;
  return o;
}

}  // namespace

StageSummary run_fw(const RunConfig& config) {
  return for_each_genre(config, [&](Genre g, const GenreInputs&, StageSummary& s) {
    const Corpus corpus = load_stage_corpus("fw", config, g, tagged_file(config, g), "tag");
    std::vector<FwResult> results;
    try {
      results = fw_for_speakers(corpus, corpus.pool_speakers(), fw_options(config, g));
    } catch (const Error& e) {
      throw StageError("fw", e.what());
    }
    AtomicFile fw_out(config.output_dir / "fw" / (genre_name(g) + "_fw.csv"));
    write_fw_csv(fw_out.stream(), results, config.fw.top_n);
    s.written.push_back(fw_out.commit());
    AtomicFile om_out(config.output_dir / "fw" / (genre_name(g) + "_overlap.csv"));
    write_overlap_csv(om_out.stream(), overlap_report(results, config.fw.top_n));
    s.written.push_back(om_out.commit());
  });
}

StageSummary run_report(const RunConfig& config) {
  config.validate();
  StageSummary s;
  const fs::path dir = config.output_dir / "report";
  std::optional<Lexicon> storage;
  const Lexicon& lex = active_lexicon(config, storage);
  std::vector<MentionRateRow> genre_rates;
  std::map<std::string, std::string> digests;

  auto write = [&](const std::string& name, auto&& body) {
    AtomicFile out(dir / name);
    body(out.stream());
    const fs::path p = out.commit();
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    digests[name] = hex64(fnv1a64(ss.str()));
    s.written.push_back(p);
  };

  for (const auto& [g, in] : config.genres) {
    const std::string gn = genre_name(g);
    const Corpus corpus = load_stage_corpus("report", config, g, tagged_file(config, g), "tag");
    const fs::path sp = scores_file(config, g);
    require("report", sp, "score");
    std::ifstream sin(sp);
    const RecordFile rf = read_records(sin);
    check_hash("report", config, sp, rf.meta);
    const auto& records = rf.records;
    const MentionPolicy policy = mention_policy(config, g);

    write(gn + "_sentence_lengths.csv", [&](std::ostream& o) {
      o << "speaker,sentences,mean_words,mean_chars\n";
      for (const auto& [id, st] : summarize(corpus).per_speaker) {
        o << csv::row({id, std::to_string(st.sentences), csv::num(st.mean_words()),
                       csv::num(st.mean_chars())});
      }
    });

    AggregateOptions ao;
    ao.focus_speaker = config.report.focus_speaker;
    ao.ci = config.report.ci == "bootstrap" ? CiMethod::kBootstrap : CiMethod::kNormal;
    ao.bootstrap_samples = config.report.bootstrap_samples;
    ao.seed = config.seed;
    ao.length_bin_width = config.report.length_bin_width;
    ao.length_max = config.report.length_max;
    const std::pair<const char*, std::vector<Dimension>> views[] = {
        {"speaker", {Dimension::kSpeaker}},
        {"party", {Dimension::kParty}},
        {"party|length", {Dimension::kParty, Dimension::kLengthBin}},
        {"speaker|term", {Dimension::kSpeaker, Dimension::kTerm}},
        {"speaker|year", {Dimension::kSpeaker, Dimension::kYear}},
        {"speaker", {Dimension::kDecile}},
        {"speaker|mention", {Dimension::kSpeaker, Dimension::kMention}},
    };
    const char* file_names[] = {"speaker", "party", "length", "term", "year", "top_decile",
                                "mention"};
    for (std::size_t v = 0; v < std::size(views); ++v) {
      const auto& [header, dims] = views[v];
      write(fmt::format("{}_uniq_by_{}.csv", gn, file_names[v]), [&](std::ostream& o) {
        write_group_csv(o, header, aggregate(records, corpus, dims, ao));
      });
    }
    AggregateOptions bo = ao;
    bo.metric = Metric::kBpcOriginal;
    write(gn + "_bpc_by_speaker.csv", [&](std::ostream& o) {
      const Dimension d[] = {Dimension::kSpeaker};
      write_group_csv(o, "speaker", aggregate(records, corpus, d, bo));
    });

    const std::pair<const char*, DivisiveGroup> groups[] = {{"speaker", DivisiveGroup::kSpeaker},
                                                            {"year", DivisiveGroup::kYear},
                                                            {"term", DivisiveGroup::kTerm}};
    for (const auto& [name, group] : groups) {
      write(fmt::format("{}_divisive_by_{}.csv", gn, name), [&](std::ostream& o) {
        write_frequency_csv(o, divisive_frequency(corpus, lex, group));
      });
    }
    write(gn + "_divisive_heatmap.csv", [&](std::ostream& o) {
      o << "speaker,term,count,frequency\n";
      for (const auto& c : divisive_heatmap(corpus, lex)) {
        o << csv::row({c.speaker, c.term, std::to_string(c.count), csv::num(c.frequency)});
      }
    });
    write(gn + "_divisive_top_terms.csv", [&](std::ostream& o) {
      o << "speaker,rank,term,count\n";
      for (const auto& sp_id : corpus.pool_speakers()) {
        const auto top = top_divisive_terms(corpus, lex, sp_id, config.report.top_terms);
        for (std::size_t k = 0; k < top.size(); ++k) {
          o << csv::row({sp_id, std::to_string(k + 1), top[k].first,
                         std::to_string(top[k].second)});
        }
      }
    });

    write(gn + "_mention_rates.csv", [&](std::ostream& o) {
      write_mention_csv(o, mention_rate(corpus, MentionGroup::kSpeaker, policy));
    });
    for (auto& r : mention_rate(corpus, MentionGroup::kGenre, policy)) {
      genre_rates.push_back(std::move(r));
    }

    std::vector<FwResult> fw;
    try {
      fw = fw_for_speakers(corpus, corpus.pool_speakers(), fw_options(config, g));
    } catch (const Error& e) {
      throw StageError("report", e.what());
    }
    write(gn + "_fw_overlap.csv", [&](std::ostream& o) {
      write_overlap_csv(o, overlap_report(fw, config.fw.top_n));
    });

    write(gn + "_correlations.csv",
          [&](std::ostream& o) { write_correlation_matrix_csv(o, records, corpus); });
    write(gn + "_metric_relations.csv", [&](std::ostream& o) {
      write_relations_csv(o, relate_metrics(records, corpus, lex, policy));
    });
  }
  write("mention_rates_by_genre.csv", [&](std::ostream& o) { write_mention_csv(o, genre_rates); });

  AtomicFile manifest(dir / "manifest.json");
  manifest.stream() << json{{"config_hash", config.hash()}, {"files", digests}}.dump(2) << '\n';
  s.written.push_back(manifest.commit());
  log("report", fmt::format("{} files written to {}", s.written.size(), dir.generic_string()));
  return s;
}

StageSummary run_all(const RunConfig& config) {
  StageSummary all;
  for (auto* stage : {&run_ingest, &run_tag, &run_train, &run_score, &run_fw, &run_report}) {
    auto s = stage(config);
    all.written.insert(all.written.end(), s.written.begin(), s.written.end());
  }
  return all;
}

}  // namespace rhetoric
