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

#include "rhetoric/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "json.hpp"
#include "text_util.hpp"

namespace rhetoric {

using nlohmann::json;

std::string_view to_string(MentionLabel m) {
  switch (m) {
    case MentionLabel::kNone:
      return "none";
    case MentionLabel::kPossible:
      return "possible";
    case MentionLabel::kDefinite:
      return "definite";
  }
  return "none";
}

MentionLabel parse_mention_label(std::string_view s) {
  if (s == "none") return MentionLabel::kNone;
  if (s == "possible") return MentionLabel::kPossible;
  if (s == "definite") return MentionLabel::kDefinite;
  throw Error(fmt::format("unknown mention label '{}'", s));
}

void Corpus::add_speaker(Speaker s) {
  if (s.id.empty()) throw Error("speaker id is empty");
  if (s.display_name.empty()) throw Error(fmt::format("speaker '{}' has no display name", s.id));
  if (speaker_index_.count(s.id)) throw Error(fmt::format("duplicate speaker id '{}'", s.id));
  speaker_index_.emplace(s.id, speakers_.size());
  speakers_.push_back(std::move(s));
}

void Corpus::add_document(Document d) {
  if (document_index_.count(d.id)) throw Error(fmt::format("duplicate document id '{}'", d.id));
  if (d.genre != genre_) {
    throw Error(fmt::format("document '{}' has genre {} in a {} corpus", d.id,
                            to_string(d.genre), to_string(genre_)));
  }
  document_index_.emplace(d.id, documents_.size());
  doc_sentences_[d.id];
  documents_.push_back(std::move(d));
}

void Corpus::add_sentence(Sentence s) {
  if (!document_index_.count(s.doc_id)) {
    throw Error(fmt::format("sentence '{}' references unknown document '{}'", s.id, s.doc_id));
  }
  if (!speaker_index_.count(s.speaker_id)) {
    throw Error(fmt::format("sentence '{}' references unknown speaker '{}'", s.id,
                            s.speaker_id));
  }
  if (sentence_index_.count(s.id)) throw Error(fmt::format("duplicate sentence id '{}'", s.id));
  auto& in_doc = doc_sentences_[s.doc_id];
  if (!in_doc.empty() && sentences_[in_doc.back()].seq >= s.seq) {
    throw Error(fmt::format("sentence '{}' breaks seq order in document '{}'", s.id, s.doc_id));
  }
  in_doc.push_back(sentences_.size());
  sentence_index_.emplace(s.id, sentences_.size());
  sentences_.push_back(std::move(s));
}

void Corpus::set_mention_label(std::size_t sentence_index, MentionLabel label) {
  sentences_.at(sentence_index).mention_label = label;
}

const Speaker* Corpus::find_speaker(std::string_view id) const {
  auto it = speaker_index_.find(std::string(id));
  return it == speaker_index_.end() ? nullptr : &speakers_[it->second];
}

const Speaker& Corpus::speaker(std::string_view id) const {
  const Speaker* s = find_speaker(id);
  if (!s) throw Error(fmt::format("unknown speaker '{}'", id));
  return *s;
}

const Document& Corpus::document(std::string_view id) const {
  auto it = document_index_.find(std::string(id));
  if (it == document_index_.end()) throw Error(fmt::format("unknown document '{}'", id));
  return documents_[it->second];
}

const std::vector<std::size_t>& Corpus::document_sentences(std::string_view doc_id) const {
  auto it = doc_sentences_.find(std::string(doc_id));
  if (it == doc_sentences_.end()) throw Error(fmt::format("unknown document '{}'", doc_id));
  return it->second;
}

std::optional<std::size_t> Corpus::sentence_index(std::string_view sentence_id) const {
  auto it = sentence_index_.find(std::string(sentence_id));
  if (it == sentence_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Corpus::pool_speakers() const {
  std::vector<std::string> out;
  for (const auto& s : speakers_) {
    if (s.is_pool_member) out.push_back(s.id);
  }
  return out;
}

bool Corpus::operator==(const Corpus& other) const {
  return genre_ == other.genre_ && speakers_ == other.speakers_ &&
         documents_ == other.documents_ && sentences_ == other.sentences_;
}

IngestReport summarize(const Corpus& corpus) {
  IngestReport r;
  r.documents = corpus.documents().size();
  r.sentences = corpus.sentences().size();
  for (const auto& s : corpus.sentences()) {
    auto& st = r.per_speaker[s.speaker_id];
    ++st.sentences;
    st.words += s.word_count;
    st.chars += s.char_len;
  }
  return r;
}

namespace {

struct RawRecord {
  int line = 0;
  std::string speaker;
  Party party = Party::kOther;
  int seq = 0;
  std::string text;
  std::optional<std::vector<std::string>> pos;
  std::optional<MentionLabel> mention;
};

struct RawDocument {
  Document doc;
  int first_line = 0;
  std::vector<RawRecord> records;
};

std::string require_string(const json& j, const char* key, int line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(fmt::format("line {}: missing or non-string \"{}\"", line, key));
  }
  return it->get<std::string>();
}

}  // namespace

IngestResult ingest(std::istream& in, Genre genre, const IngestOptions& options) {
  const std::vector<std::string> stoplist =
      options.audience_stoplist ? *options.audience_stoplist : bundled_audience_stoplist();
  std::shared_ptr<const EntityProvider> ner = options.ner;
  if (!ner) ner = std::make_shared<CapitalizedRunTagger>();

  IngestResult result{Corpus(genre), {}, std::nullopt};
  std::vector<RawDocument> docs;
  std::unordered_map<std::string, std::size_t> doc_pos;
  std::map<std::string, Party> speaker_party;

  std::string line;
  int line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(fmt::format("line {}: malformed JSON ({})", line_no, e.what()));
    }
    if (!j.is_object()) throw ParseError(fmt::format("line {}: record is not an object", line_no));
    if (j.contains("_meta")) {
      if (seen_content) {
        throw ParseError(fmt::format("line {}: _meta header must come first", line_no));
      }
      result.meta = j["_meta"].dump();
      seen_content = true;
      continue;
    }
    seen_content = true;
    ++result.report.records;

    const std::string genre_s = require_string(j, "genre", line_no);
    Genre rec_genre;
    try {
      rec_genre = parse_genre(genre_s);
    } catch (const Error&) {
      throw ParseError(fmt::format("line {}: unknown genre '{}'", line_no, genre_s));
    }
    if (rec_genre != genre) {
      throw ParseError(fmt::format("line {}: genre '{}' does not match corpus genre '{}'",
                                   line_no, genre_s, to_string(genre)));
    }

    Document doc;
    doc.id = require_string(j, "doc_id", line_no);
    if (doc.id.empty()) throw ParseError(fmt::format("line {}: empty doc_id", line_no));
    doc.genre = genre;
    if (auto it = j.find("date"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError(fmt::format("line {}: non-string date", line_no));
      const auto ds = it->get<std::string>();
      if (!ds.empty()) {
        try {
          doc.date = parse_date(ds);
        } catch (const Error& e) {
          throw ParseError(fmt::format("line {}: {}", line_no, e.what()));
        }
        doc.election_cycle = election_cycle_of(*doc.date);
      }
    }
    if (auto it = j.find("title"); it != j.end() && it->is_string()) {
      doc.title = it->get<std::string>();
    }

    RawRecord rec;
    rec.line = line_no;
    rec.speaker = require_string(j, "speaker", line_no);
    if (rec.speaker.empty()) throw ParseError(fmt::format("line {}: empty speaker", line_no));
    const std::string party_s = require_string(j, "party", line_no);
    try {
      rec.party = parse_party(party_s);
    } catch (const Error&) {
      throw ParseError(fmt::format("line {}: unknown party '{}'", line_no, party_s));
    }
    auto seq_it = j.find("seq");
    if (seq_it == j.end() || !seq_it->is_number_integer()) {
      throw ParseError(fmt::format("line {}: missing or non-integer \"seq\"", line_no));
    }
    rec.seq = seq_it->get<int>();
    rec.text = require_string(j, "text", line_no);
    if (auto it = j.find("pos"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw ParseError(fmt::format("line {}: \"pos\" must be an array", line_no));
      std::vector<std::string> tags;
      for (const auto& t : *it) {
        if (!t.is_string()) throw ParseError(fmt::format("line {}: non-string pos tag", line_no));
        tags.push_back(t.get<std::string>());
      }
      rec.pos = std::move(tags);
    }
    if (auto it = j.find("mention"); it != j.end() && it->is_string()) {
      try {
        rec.mention = parse_mention_label(it->get<std::string>());
      } catch (const Error& e) {
        throw ParseError(fmt::format("line {}: {}", line_no, e.what()));
      }
    }

    if (auto sp = speaker_party.find(rec.speaker); sp == speaker_party.end()) {
      speaker_party.emplace(rec.speaker, rec.party);
    } else if (sp->second != rec.party) {
      throw ParseError(fmt::format("line {}: speaker '{}' changes party", line_no, rec.speaker));
    }

    auto [dit, inserted] = doc_pos.emplace(doc.id, docs.size());
    if (inserted) {
      docs.push_back({doc, line_no, {}});
    } else {
      const Document& prev = docs[dit->second].doc;
      if (prev.date != doc.date || prev.title != doc.title) {
        throw ParseError(fmt::format("line {}: document '{}' metadata differs from line {}",
                                     line_no, doc.id, docs[dit->second].first_line));
      }
    }
    docs[dit->second].records.push_back(std::move(rec));
  }

  std::vector<std::pair<Document, std::vector<Sentence>>> built;
  for (auto& rd : docs) {
    std::stable_sort(rd.records.begin(), rd.records.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.seq < b.seq; });
    for (std::size_t i = 1; i < rd.records.size(); ++i) {
      if (rd.records[i].seq == rd.records[i - 1].seq) {
        throw ParseError(fmt::format("line {}: duplicate id {}#{} (first on line {})",
                                     rd.records[i].line, rd.doc.id, rd.records[i].seq,
                                     rd.records[i - 1].line));
      }
    }
    std::vector<Sentence> sentences;
    int seq = 0;
    for (const auto& rec : rd.records) {
      std::size_t removed = 0;
      const std::string cleaned = strip_audience_annotations(rec.text, stoplist, &removed);
      result.report.dropped_annotations += removed;
      if (cleaned.empty()) continue;
      std::size_t pos_cursor = 0;
      for (const auto& piece : segment(cleaned)) {
        Sentence s;
        s.doc_id = rd.doc.id;
        s.speaker_id = rec.speaker;
        s.raw_text = piece;
        s.normalized_text = normalize(piece);
        const auto words = split_whitespace(s.normalized_text);
        if (rec.pos) {
          if (pos_cursor + words.size() > rec.pos->size()) {
            throw ParseError(fmt::format(
                "line {}: \"pos\" has {} tags but the normalized text has more tokens",
                rec.line, rec.pos->size()));
          }
          s.pos_tags.assign(rec.pos->begin() + static_cast<std::ptrdiff_t>(pos_cursor),
                            rec.pos->begin() +
                                static_cast<std::ptrdiff_t>(pos_cursor + words.size()));
          pos_cursor += words.size();
        }
        if (words.empty()) {
          ++result.report.dropped_empty;
          continue;
        }
        s.seq = seq++;
        s.id = fmt::format("{}#{}", rd.doc.id, s.seq);
        s.masked_text = mask_entities(piece, *ner);
        s.char_len = text::utf8_length(piece);
        s.word_count = words.size();
        if (rec.mention) s.mention_label = *rec.mention;
        sentences.push_back(std::move(s));
      }
      if (rec.pos && pos_cursor != rec.pos->size()) {
        throw ParseError(fmt::format("line {}: \"pos\" has {} tags for {} normalized tokens",
                                     rec.line, rec.pos->size(), pos_cursor));
      }
    }
    if (!sentences.empty()) built.emplace_back(rd.doc, std::move(sentences));
  }

  // Registries are ordered by first kept sentence so emit() round-trips.
  for (const auto& [doc, sentences] : built) {
    for (const auto& s : sentences) {
      if (result.corpus.find_speaker(s.speaker_id)) continue;
      Speaker sp;
      sp.id = s.speaker_id;
      sp.display_name = s.speaker_id;
      sp.party = speaker_party[s.speaker_id];
      if (options.pool) {
        sp.is_pool_member = std::find(options.pool->begin(), options.pool->end(), sp.id) !=
                            options.pool->end();
      } else {
        sp.is_pool_member = sp.party != Party::kOther;
      }
      result.corpus.add_speaker(std::move(sp));
    }
  }
  for (auto& [doc, sentences] : built) {
    result.corpus.add_document(doc);
    for (auto& s : sentences) result.corpus.add_sentence(std::move(s));
  }

  const auto summary = summarize(result.corpus);
  result.report.documents = summary.documents;
  result.report.sentences = summary.sentences;
  result.report.per_speaker = summary.per_speaker;
  return result;
}

IngestResult ingest(const std::filesystem::path& path, Genre genre,
                    const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return ingest(in, genre, options);
}

void emit(const Corpus& corpus, std::ostream& out, std::string_view meta_json) {
  if (!meta_json.empty()) {
    json header;
    header["_meta"] = json::parse(meta_json);
    out << header.dump() << '\n';
  }
  for (const auto& s : corpus.sentences()) {
    const Document& d = corpus.document(s.doc_id);
    const Speaker& sp = corpus.speaker(s.speaker_id);
    json j;
    j["doc_id"] = s.doc_id;
    j["genre"] = std::string(to_string(d.genre));
    if (d.date) j["date"] = format_date(*d.date);
    j["title"] = d.title;
    j["speaker"] = sp.id;
    j["party"] = std::string(party_code(sp.party));
    j["seq"] = s.seq;
    j["text"] = s.raw_text;
    if (!s.pos_tags.empty()) j["pos"] = s.pos_tags;
    if (s.mention_label != MentionLabel::kNone) {
      j["mention"] = std::string(to_string(s.mention_label));
    }
    out << j.dump() << '\n';
  }
}

Date us_election_day(int year) {
  using namespace std::chrono;
  const sys_days first_monday{std::chrono::year{year} / November / Monday[1]};
  return year_month_day{first_monday + days{1}};
}

namespace {

template <typename Keep>
Corpus filter_documents(const Corpus& corpus, Keep keep) {
  std::vector<std::string> missing;
  for (const auto& d : corpus.documents()) {
    if (!d.date) missing.push_back(d.id);
  }
  if (!missing.empty()) {
    throw Error(fmt::format("documents without a date: {}", join(missing, ", ")));
  }
  Corpus out(corpus.genre());
  std::vector<const Document*> kept;
  std::unordered_map<std::string, bool> speaker_used;
  for (const auto& d : corpus.documents()) {
    if (!keep(d)) continue;
    kept.push_back(&d);
    for (std::size_t i : corpus.document_sentences(d.id)) {
      speaker_used[corpus.sentences()[i].speaker_id] = true;
    }
  }
  for (const auto& s : corpus.speakers()) {
    if (speaker_used.count(s.id)) out.add_speaker(s);
  }
  for (const Document* d : kept) {
    out.add_document(*d);
    for (std::size_t i : corpus.document_sentences(d->id)) out.add_sentence(corpus.sentences()[i]);
  }
  return out;
}

bool in_window(const Date& date, const Date& election_day, int window_days) {
  using namespace std::chrono;
  const sys_days day{date};
  const sys_days eday{election_day};
  return day <= eday && day >= eday - days{window_days};
}

}  // namespace

Corpus filter_campaign_window(const Corpus& corpus, const Date& election_day,
                              int window_days, int min_cycle_year) {
  if (corpus.genre() != Genre::kCampaign) throw Error("campaign window filter needs a campaign corpus");
  if (window_days < 0) throw Error("window_days must be nonnegative");
  return filter_documents(corpus, [&](const Document& d) {
    const int cycle = d.election_cycle.value_or(election_cycle_of(*d.date));
    return cycle >= min_cycle_year && in_window(*d.date, election_day, window_days);
  });
}

Corpus filter_campaign_window(const Corpus& corpus, const std::map<int, Date>& election_days,
                              int window_days, int min_cycle_year) {
  if (corpus.genre() != Genre::kCampaign) throw Error("campaign window filter needs a campaign corpus");
  if (window_days < 0) throw Error("window_days must be nonnegative");
  return filter_documents(corpus, [&](const Document& d) {
    const int cycle = d.election_cycle.value_or(election_cycle_of(*d.date));
    auto it = election_days.find(cycle);
    return cycle >= min_cycle_year && it != election_days.end() &&
           in_window(*d.date, it->second, window_days);
  });
}

}  // namespace rhetoric
