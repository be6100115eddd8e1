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

#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "rhetoric/uniqueness.hpp"
#include "support.hpp"

using namespace rhetoric;

namespace {

// Each token costs as many bits as the prompt has characters.
class PromptLengthBackend final : public LossBackend {
 public:
  TokenLossSequence token_losses(const ScoringRequest& req) const override {
    TokenLossSequence out;
    out.tokens = lm_tokenize(req.target);
    out.losses_bits.assign(out.tokens.size(), static_cast<double>(req.speaker_prompt.size()));
    return out;
  }
};

std::string line(const std::string& doc, const std::string& speaker, const std::string& party,
                 int seq, const std::string& text, const std::string& date = "2016-10-09") {
  return "{\"doc_id\":\"" + doc + "\",\"genre\":\"debate\",\"date\":\"" + date +
         "\",\"title\":\"t\",\"speaker\":\"" + speaker + "\",\"party\":\"" + party +
         "\",\"seq\":" + std::to_string(seq) + ",\"text\":\"" + text + "\"}\n";
}

Corpus debate() {
  return testing::corpus_from_jsonl(
      line("d1", "Ann Lee", "D", 0, "We can do it.") + line("d1", "Bo Dunn", "R", 1, "No.") +
          line("d1", "Moderator", "O", 2, "Thanks.") +
          line("d2", "Cy Mayhew", "R", 0, "Yes we can do it, friends.", "2012-10-03") +
          line("d2", "Ann Lee", "D", 1, "Indeed.", "2012-10-03"),
      Genre::kDebate);
}

}  // namespace

TEST_CASE("records compute sent_uniq from bpc values") {
  const auto r = make_record("s#0", "a", 1.5, {{"b", 2.0}, {"c", 2.5}});
  CHECK(r.sent_uniq == 0.75);
  CHECK_THROWS_AS(make_record("s#0", "a", 1.0, {}), Error);
  CHECK_THROWS_AS(make_record("s#0", "a", 1.0, {{"a", 1.0}}), Error);
}

TEST_CASE("debate pool excludes speakers sharing the document") {
  const auto c = debate();
  const auto p = PoolPolicy::for_corpus(c, {"Cy Mayhew", "Bo Dunn", "Ann Lee"});
  CHECK(p.pool == std::vector<std::string>{"Ann Lee", "Bo Dunn", "Cy Mayhew"});
  CHECK(p.contains("Bo Dunn"));
  CHECK_FALSE(p.contains("Moderator"));
  CHECK(p.alternates("d1", "Ann Lee") == std::vector<std::string>{"Cy Mayhew"});
  CHECK(p.alternates("d2", "Ann Lee") == std::vector<std::string>{"Bo Dunn"});

  CHECK_THROWS_AS(PoolPolicy::for_corpus(c, {"Ann Lee"}), Error);
  CHECK_THROWS_AS(PoolPolicy::for_corpus(c, {"Ann Lee", "Nobody"}), Error);
  // Both speakers share d1, so neither has an alternate there.
  const auto two = PoolPolicy::for_corpus(c, {"Ann Lee", "Bo Dunn"});
  try {
    two.alternates("d1", "Ann Lee");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("d1") != std::string::npos);
  }
}

TEST_CASE("scores follow the definition with any backend") {
  const auto c = debate();
  const auto p = PoolPolicy::for_corpus(c, {"Ann Lee", "Bo Dunn", "Cy Mayhew"});
  const PromptLengthBackend b;
  ScoringOptions o;
  o.workers = 3;
  const auto records = score_corpus(c, b, p, o);
  REQUIRE(records.size() == 4);
  CHECK(records[0].sentence_id == "d1#0");
  CHECK(records[3].sentence_id == "d2#1");
  for (const auto& r : records) {
    const auto& s = c.sentences()[*c.sentence_index(r.sentence_id)];
    const double tokens = static_cast<double>(lm_tokenize(s.masked_text).size());
    const double chars = static_cast<double>(s.char_len);
    const auto cost = [&](const std::string& id) {
      return static_cast<double>(c.speaker(id).display_name.size() + 1) * tokens / chars;
    };
    double alt = 0.0;
    const auto alts = p.alternates(s.doc_id, s.speaker_id);
    for (const auto& a : alts) alt += cost(a);
    alt /= static_cast<double>(alts.size());
    CHECK(std::abs(r.sent_uniq - (alt - cost(s.speaker_id))) < 1e-12);
  }
  CHECK(score_corpus(c, b, p) == records);
}

TEST_CASE("prompt-blind backend gives zero uniqueness") {
  const auto c = debate();
  const auto p = PoolPolicy::for_corpus(c, {"Ann Lee", "Bo Dunn", "Cy Mayhew"});
  for (const auto& r : score_corpus(c, UniformBackend(5000), p)) CHECK(r.sent_uniq == 0.0);
}

TEST_CASE("speaker means and intervals") {
  const std::vector<UniquenessRecord> rs = {make_record("x#0", "a", 1.0, {{"b", 2.0}}),
                                            make_record("x#1", "a", 1.0, {{"b", 4.0}}),
                                            make_record("x#2", "b", 1.0, {{"a", 1.5}})};
  CHECK(speaker_uniq(rs, "a") == 2.0);
  CHECK_THROWS_AS(speaker_uniq(rs, "z"), Error);

  Eigen::VectorXd v(4);
  v << 1.0, 2.0, 3.0, 4.0;
  const auto ci = normal_ci(v);
  const double half = 1.96 * std::sqrt(5.0 / 3.0) / 2.0;
  CHECK(ci.mean == 2.5);
  CHECK(std::abs(ci.low - (2.5 - half)) < 1e-12);
  CHECK(std::abs(ci.high - (2.5 + half)) < 1e-12);

  Eigen::VectorXd one(1);
  one << 0.7;
  const auto single = normal_ci(one);
  CHECK(single.low == 0.7);
  CHECK(single.high == 0.7);

  const auto b1 = bootstrap_ci(v, 500, 42);
  const auto b2 = bootstrap_ci(v, 500, 42);
  CHECK(b1.low == b2.low);
  CHECK(b1.high == b2.high);
  CHECK(b1.low >= 1.0);
  CHECK(b1.high <= 4.0);
  CHECK(b1.low <= 2.5);
  CHECK(b1.high >= 2.5);
}

TEST_CASE("top decile") {
  std::vector<double> v(25);
  std::iota(v.begin(), v.end(), 0.0);
  CHECK(top_decile(v) == std::vector<double>{24, 23, 22});
  CHECK(top_decile({1.0}) == std::vector<double>{1.0});
}

TEST_CASE("aggregation by speaker, party and length") {
  const auto c = debate();
  const std::vector<UniquenessRecord> rs = {
      make_record("d1#0", "Ann Lee", 1.0, {{"Cy Mayhew", 1.5}}),
      make_record("d1#1", "Bo Dunn", 1.0, {{"Ann Lee", 2.0}}),
      make_record("d2#0", "Cy Mayhew", 1.0, {{"Bo Dunn", 3.0}}),
      make_record("d2#1", "Ann Lee", 1.0, {{"Bo Dunn", 1.0}})};

  const std::vector<Dimension> by_speaker = {Dimension::kSpeaker};
  const auto s = aggregate(rs, c, by_speaker);
  REQUIRE(s.size() == 3);
  CHECK(s[0].group == "Ann Lee");
  CHECK(s[0].n == 2);
  CHECK(s[0].mean == 0.25);

  AggregateOptions o;
  o.focus_speaker = "Bo Dunn";
  const std::vector<Dimension> by_party = {Dimension::kParty};
  const auto p = aggregate(rs, c, by_party, o);
  REQUIRE(p.size() == 3);
  CHECK(p[0].group == "Bo Dunn");
  CHECK(p[1].group == "Other Republicans");
  CHECK(p[2].group == "Democrats");
  CHECK(p[2].mean == 0.25);

  const std::vector<Dimension> by_len = {Dimension::kLengthBin};
  const auto l = aggregate(rs, c, by_len);
  REQUIRE(l.size() == 2);
  CHECK(l[0].group == "0-5");
  CHECK(l[0].n == 3);
  CHECK(l[1].group == "5-10");

  const std::vector<Dimension> by_year_speaker = {Dimension::kYear, Dimension::kSpeaker};
  const auto ys = aggregate(rs, c, by_year_speaker);
  CHECK(ys.front().group == "2012|Ann Lee");
  CHECK(ys.back().group == "2016|Bo Dunn");
}

TEST_CASE("records round trip through JSONL") {
  const std::vector<UniquenessRecord> rs = {
      make_record("d1#0", "Ann Lee", 0.1 + 0.2, {{"Cy Mayhew", 1.0 / 3.0}})};
  std::stringstream buf;
  write_records(buf, rs, R"({"config_hash":"abc"})");
  const auto back = read_records(buf);
  CHECK(back.records == rs);
  REQUIRE(back.meta);
  CHECK(back.meta->find("abc") != std::string::npos);

  std::stringstream bad("{\"sentence_id\": 3}\n");
  CHECK_THROWS_AS(read_records(bad), ParseError);
}
