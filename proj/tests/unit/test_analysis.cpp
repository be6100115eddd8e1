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
#include <sstream>

#include "doctest.h"
#include "rhetoric/analysis.hpp"
#include "support.hpp"

using namespace rhetoric;

namespace {

std::string line(int seq, const std::string& text, const std::string& mention = "") {
  std::string out =
      "{\"doc_id\":\"c\",\"genre\":\"campaign\",\"date\":\"2016-10-01\",\"title\":\"t\","
      "\"speaker\":\"Ann Lee\",\"party\":\"R\",\"seq\":" +
      std::to_string(seq) + ",\"text\":\"" + text + "\"";
  if (!mention.empty()) out += ",\"mention\":\"" + mention + "\"";
  return out + "}\n";
}

}  // namespace

TEST_CASE("syllable heuristic") {
  CHECK(count_syllables("cat") == 1);
  CHECK(count_syllables("make") == 1);
  CHECK(count_syllables("table") == 2);
  CHECK(count_syllables("agree") == 2);
  CHECK(count_syllables("beautiful") == 3);
  CHECK(count_syllables("123") == 1);
}

TEST_CASE("readability of a three-word sentence") {
  const auto r = readability("the cat sat");
  CHECK(std::abs(r.fkgl - (0.39 * 3 + 11.8 * 1 - 15.59)) < 1e-12);
  CHECK(std::abs(r.fkgl - (-2.62)) < 1e-12);
  CHECK(std::abs(r.ari - (4.71 * 3 + 0.5 * 3 - 21.43)) < 1e-12);
  CHECK(std::abs(r.ari - (-5.80)) < 1e-12);
  CHECK(std::abs(r.fog - 0.4 * 3) < 1e-12);
  CHECK(std::abs(r.dale_chall - 0.0496 * 3) < 1e-12);

  const auto again = readability("the cat sat");
  CHECK(again.fkgl == r.fkgl);
  CHECK(again.dale_chall == r.dale_chall);
  CHECK_THROWS_AS(readability("   "), Error);
}

TEST_CASE("readability counts complex and difficult words") {
  const auto r = readability("the extraordinary cat");
  // One word of three or more syllables, and it is not on the easy list.
  CHECK(std::abs(r.fog - 0.4 * (3 + 100.0 / 3)) < 1e-12);
  CHECK(std::abs(r.dale_chall - (0.1579 * 100.0 / 3 + 0.0496 * 3 + 3.6365)) < 1e-12);
}

TEST_CASE("average ranks") {
  const std::vector<double> v = {10, 20, 20, 5};
  CHECK(average_ranks(v) == std::vector<double>{2, 3.5, 3.5, 1});
}

TEST_CASE("spearman correlation") {
  const std::vector<double> x = {1, 2, 3, 4}, y = {1, 3, 2, 4};
  const auto s = spearman(x, y);
  REQUIRE(s.defined);
  CHECK(std::abs(s.rho - 0.8) < 1e-12);
  // Student t with two degrees of freedom has a closed-form tail.
  const double t = 0.8 * std::sqrt(2.0) / std::sqrt(1 - 0.64);
  CHECK(std::abs(s.p - (1 - t / std::sqrt(2 + t * t))) < 1e-9);

  const std::vector<double> rev = {4, 3, 2, 1};
  CHECK(std::abs(spearman(x, x).rho - 1.0) < 1e-12);
  CHECK(std::abs(spearman(x, rev).rho + 1.0) < 1e-12);

  const std::vector<double> cubed = {1, 8, 27, 64};
  CHECK(std::abs(spearman(cubed, y).rho - 0.8) < 1e-12);

  const std::vector<double> flat = {2, 2, 2, 2};
  const auto c = spearman(x, flat);
  CHECK_FALSE(c.defined);
  CHECK(std::isnan(c.rho));

  const std::vector<double> two = {1, 2};
  CHECK_THROWS_AS(spearman(two, two), Error);
  CHECK_THROWS_AS(spearman(x, two), Error);
}

TEST_CASE("metric relations on a constructed corpus") {
  const auto c = testing::corpus_from_jsonl(
      line(0, "What a stupid plan.", "definite") + line(1, "We met today.") +
          line(2, "A corrupt deal.") + line(3, "The sun rose.") + line(4, "They talked."),
      Genre::kCampaign);
  const auto lex = Lexicon::parse("stupid\ncorrupt\n");
  const std::vector<UniquenessRecord> rs = {
      make_record("c#0", "Ann Lee", 1.0, {{"Bo Dunn", 3.0}}),
      make_record("c#1", "Ann Lee", 1.0, {{"Bo Dunn", 1.5}}),
      make_record("c#2", "Ann Lee", 1.0, {{"Bo Dunn", 2.5}}),
      make_record("c#3", "Ann Lee", 1.0, {{"Bo Dunn", 1.0}}),
      make_record("c#4", "Ann Lee", 1.0, {{"Bo Dunn", 1.25}})};
  const auto rel = relate_metrics(rs, c, lex);
  REQUIRE(rel.groups.size() == 4);
  CHECK(rel.groups[0].stratum == "divisive");
  CHECK(rel.groups[0].group == "yes");
  CHECK(rel.groups[0].n == 2);
  CHECK(rel.groups[0].mean == 1.75);
  REQUIRE(rel.gaps.size() == 2);
  CHECK(rel.gaps[0].first == "divisive");
  CHECK(std::abs(rel.gaps[0].second - (1.75 - 0.25)) < 1e-12);
  CHECK(rel.gaps[1].second > 0);
  CHECK(rel.correlations.size() == 6);

  std::ostringstream out;
  write_relations_csv(out, rel);
  CHECK(out.str().starts_with("kind,x,y,n,value,ci_low,ci_high,p\n"));
}

TEST_CASE("identical sentences give zero gaps") {
  const auto c = testing::corpus_from_jsonl(
      line(0, "A stupid plan.", "definite") + line(1, "A good plan.") + line(2, "A fine plan."),
      Genre::kCampaign);
  const std::vector<UniquenessRecord> rs = {make_record("c#0", "Ann Lee", 1.0, {{"Bo Dunn", 1.5}}),
                                            make_record("c#1", "Ann Lee", 1.0, {{"Bo Dunn", 1.5}}),
                                            make_record("c#2", "Ann Lee", 1.0, {{"Bo Dunn", 1.5}})};
  const auto rel = relate_metrics(rs, c, Lexicon::parse("stupid\n"));
  for (const auto& [name, gap] : rel.gaps) CHECK(gap == 0.0);

  std::ostringstream out;
  write_correlation_matrix_csv(out, rs, c);
  CHECK(out.str().starts_with("metric,uniqueness,length,fkgl,fog,dale_chall,ari\n"));
  CHECK(out.str().find("nan") != std::string::npos);
}
