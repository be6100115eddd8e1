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

#include "rhetoric/opponent_tagging.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "rhetoric/csv.hpp"

namespace rhetoric {

using nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(fmt::format("{} must be an array of strings", where));
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ParseError(fmt::format("{} must be an array of strings", where));
    out.push_back(v.get<std::string>());
  }
  return out;
}

bool contains_phrase(const std::vector<std::string>& words,
                     const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > words.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(i))) {
      return true;
    }
  }
  return false;
}

bool matches_any(const std::vector<std::string>& words,
                 const std::vector<std::string>& patterns) {
  return std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
    return contains_phrase(words, mention_words(p));
  });
}

}  // namespace

MentionRuleSet MentionRuleSet::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("rule set: malformed JSON ({})", e.what()));
  }
  if (!j.is_object()) throw ParseError("rule set: top level must be an object");
  MentionRuleSet rules;
  if (!j.contains("genre") || !j["genre"].is_string()) throw ParseError("rule set: missing \"genre\"");
  rules.genre = parse_genre(j["genre"].get<std::string>());
  if (auto it = j.find("party_keywords"); it != j.end()) {
    for (const auto& [code, list] : it->items()) {
      rules.party_keywords[parse_party(code)] = string_list(list, "party_keywords." + code);
    }
  }
  if (auto it = j.find("possible_triggers"); it != j.end()) {
    rules.possible_triggers = string_list(*it, "possible_triggers");
  }
  if (auto it = j.find("unresolved_surnames"); it != j.end()) {
    rules.unresolved_surnames = string_list(*it, "unresolved_surnames");
  }
  auto sp = j.find("speakers");
  if (sp == j.end() || !sp->is_object()) throw ParseError("rule set: missing \"speakers\" object");
  for (const auto& [id, body] : sp->items()) {
    SpeakerRules r;
    if (body.contains("names")) r.names = string_list(body["names"], id + ".names");
    if (body.contains("opponents")) r.opponents = string_list(body["opponents"], id + ".opponents");
    for (const auto* list : {&r.names, &r.opponents}) {
      for (const auto& p : *list) {
        if (mention_words(p).empty()) {
          throw ParseError(fmt::format("rule set: empty pattern for speaker '{}'", id));
        }
      }
    }
    rules.speakers.emplace(id, std::move(r));
  }
  return rules;
}

MentionRuleSet MentionRuleSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::vector<std::string> mention_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

MentionLabel classify_mention(std::string_view text,
                              const std::vector<std::string>& opponent_patterns,
                              const std::vector<std::string>& possible_patterns) {
  const auto words = mention_words(text);
  if (matches_any(words, opponent_patterns)) return MentionLabel::kDefinite;
  if (matches_any(words, possible_patterns)) return MentionLabel::kPossible;
  return MentionLabel::kNone;
}

std::vector<std::string> opponent_patterns(const Corpus& corpus, const MentionRuleSet& rules,
                                           std::string_view doc_id,
                                           std::string_view speaker_id) {
  auto self = rules.speakers.find(std::string(speaker_id));
  if (self == rules.speakers.end()) {
    throw Error(fmt::format("speaker '{}' has no entry in the mention rule set", speaker_id));
  }
  std::vector<std::string> patterns = self->second.opponents;
  if (rules.genre == Genre::kDebate) {
    const Party own = corpus.speaker(speaker_id).party;
    std::set<std::string> partners;
    for (std::size_t i : corpus.document_sentences(doc_id)) {
      const auto& other = corpus.sentences()[i].speaker_id;
      if (other != speaker_id && corpus.speaker(other).is_pool_member) partners.insert(other);
    }
    for (const auto& p : partners) {
      auto r = rules.speakers.find(p);
      if (r != rules.speakers.end()) {
        patterns.insert(patterns.end(), r->second.names.begin(), r->second.names.end());
      }
      const Party party = corpus.speaker(p).party;
      if (party != own) {
        auto kw = rules.party_keywords.find(party);
        if (kw != rules.party_keywords.end()) {
          patterns.insert(patterns.end(), kw->second.begin(), kw->second.end());
        }
      }
    }
  }
  return patterns;
}

Corpus tag_mentions(const Corpus& corpus, const MentionRuleSet& rules) {
  if (rules.genre != corpus.genre()) {
    throw Error(fmt::format("rule set is for {} but corpus is {}", to_string(rules.genre),
                            to_string(corpus.genre())));
  }
  std::vector<std::string> missing;
  for (const auto& s : corpus.speakers()) {
    if (s.is_pool_member && !rules.speakers.count(s.id)) missing.push_back(s.id);
  }
  if (!missing.empty()) {
    throw Error(fmt::format("speakers absent from the mention rule set: {}", join(missing, ", ")));
  }

  std::vector<std::string> possible = rules.possible_triggers;
  possible.insert(possible.end(), rules.unresolved_surnames.begin(),
                  rules.unresolved_surnames.end());

  Corpus out = corpus;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> cache;
  for (std::size_t i = 0; i < corpus.sentences().size(); ++i) {
    const Sentence& s = corpus.sentences()[i];
    if (!corpus.speaker(s.speaker_id).is_pool_member) {
      out.set_mention_label(i, MentionLabel::kNone);
      continue;
    }
    auto key = std::make_pair(s.doc_id, s.speaker_id);
    auto it = cache.find(key);
    if (it == cache.end()) {
      auto patterns = opponent_patterns(corpus, rules, s.doc_id, s.speaker_id);
      if (patterns.empty()) {
        throw Error(fmt::format("no opponent patterns for speaker '{}' in document '{}'",
                                s.speaker_id, s.doc_id));
      }
      it = cache.emplace(key, std::move(patterns)).first;
    }
    out.set_mention_label(i, classify_mention(s.raw_text, it->second, possible));
  }
  return out;
}

bool counts_as_mention(const Sentence& s, const MentionPolicy& policy) {
  if (s.mention_label == MentionLabel::kDefinite) return true;
  if (s.mention_label == MentionLabel::kPossible) {
    return policy.include_possible || policy.confirmed.count(s.id) > 0;
  }
  return false;
}

std::vector<MentionRateRow> mention_rate(const Corpus& corpus, MentionGroup group_by,
                                         const MentionPolicy& policy) {
  std::map<std::string, MentionRateRow> rows;
  std::vector<std::string> order;
  for (const auto& s : corpus.sentences()) {
    if (!corpus.speaker(s.speaker_id).is_pool_member) continue;
    const std::string key = group_by == MentionGroup::kSpeaker
                                ? s.speaker_id
                                : std::string(to_string(corpus.genre()));
    auto [it, inserted] = rows.try_emplace(key);
    if (inserted) {
      it->second.group = key;
      order.push_back(key);
    }
    ++it->second.total;
    if (counts_as_mention(s, policy)) ++it->second.mentions;
  }
  std::vector<MentionRateRow> out;
  for (const auto& key : order) {
    auto row = rows[key];
    row.rate = static_cast<double>(row.mentions) / static_cast<double>(row.total);
    out.push_back(row);
  }
  return out;
}

ReviewFile::ReviewFile(std::vector<ReviewRow> rows) : rows_(std::move(rows)) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : rows_) {
    if (!seen.emplace(r.sentence_id, r.rater_id).second) {
      throw ParseError(fmt::format("review file: rater '{}' labels sentence '{}' twice",
                                   r.rater_id, r.sentence_id));
    }
  }
}

ReviewFile ReviewFile::parse(std::istream& in) {
  const auto table = csv::read(in);
  if (table.header != std::vector<std::string>{"sentence_id", "rater_id", "label"}) {
    throw ParseError("review file: header must be sentence_id,rater_id,label");
  }
  std::vector<ReviewRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    if (f.size() != 3) {
      throw ParseError(fmt::format("review file line {}: expected 3 fields", table.line_numbers[i]));
    }
    const std::string label = to_lower_ascii(trim(f[2]));
    if (label != "yes" && label != "no") {
      throw ParseError(fmt::format("review file line {}: label '{}' is not yes/no",
                                   table.line_numbers[i], f[2]));
    }
    rows.push_back({trim(f[0]), trim(f[1]), label == "yes"});
  }
  return ReviewFile(std::move(rows));
}

ReviewFile ReviewFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return parse(in);
}

std::set<std::string> ReviewFile::confirmed() const {
  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : rows_) {
    auto& t = tally[r.sentence_id];
    (r.yes ? t.first : t.second) += 1;
  }
  std::set<std::string> out;
  for (const auto& [id, t] : tally) {
    if (2 * t.first > t.first + t.second) out.insert(id);
  }
  return out;
}

double cohen_kappa(const ReviewFile& file, std::string_view rater_a, std::string_view rater_b) {
  std::map<std::string, bool> a;
  std::map<std::string, bool> b;
  for (const auto& r : file.rows()) {
    if (r.rater_id == rater_a) a[r.sentence_id] = r.yes;
    if (r.rater_id == rater_b) b[r.sentence_id] = r.yes;
  }
  double n = 0;
  double agree = 0;
  double a_yes = 0;
  double b_yes = 0;
  for (const auto& [id, la] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    n += 1;
    agree += la == it->second ? 1 : 0;
    a_yes += la ? 1 : 0;
    b_yes += it->second ? 1 : 0;
  }
  if (n == 0) {
    throw Error(fmt::format("raters '{}' and '{}' share no items", rater_a, rater_b));
  }
  const double po = agree / n;
  const double pa = a_yes / n;
  const double pb = b_yes / n;
  const double pe = pa * pb + (1 - pa) * (1 - pb);
  if (pe == 1.0) return 1.0;  // both raters constant and equal
  return (po - pe) / (1 - pe);
}

void write_review_queue(const Corpus& corpus, std::ostream& out) {
  out << csv::row({"sentence_id", "speaker", "text"});
  for (const auto& s : corpus.sentences()) {
    if (s.mention_label == MentionLabel::kPossible) {
      out << csv::row({s.id, s.speaker_id, s.raw_text});
    }
  }
}

}  // namespace rhetoric
