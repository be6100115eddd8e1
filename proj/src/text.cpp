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

// Sentence segmentation, normalization and entity masking.

#include <algorithm>
#include <cctype>
#include <mutex>
#include <unordered_set>

#include <fmt/format.h>

#include "rhetoric/corpus.hpp"
#include "rhetoric/embedded_data.hpp"
#include "text_util.hpp"

namespace rhetoric {

namespace text {

std::size_t utf8_punct_len(std::string_view s, std::size_t i) {
  if (i + 2 < s.size() + 0 && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80) {
    switch (static_cast<unsigned char>(s[i + 2])) {
      case 0x93:  // en dash
      case 0x94:  // em dash
      case 0x98:  // left single quote
      case 0x99:  // right single quote
      case 0x9C:  // left double quote
      case 0x9D:  // right double quote
      case 0xA2:  // bullet
      case 0xA6:  // ellipsis
        return 3;
      default:
        break;
    }
  }
  return 0;
}

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::size_t punct_len(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  if (is_ascii_punct(s[i])) return 1;
  return utf8_punct_len(s, i);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<Token> tokenize_with_offsets(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back({i, j});
    i = j;
  }
  return out;
}

std::pair<std::size_t, std::size_t> core_bounds(std::string_view tok) {
  std::size_t b = 0;
  std::size_t e = tok.size();
  while (b < e) {
    const std::size_t n = punct_len(tok, b);
    if (n == 0) break;
    b += n;
  }
  while (e > b) {
    if (is_ascii_punct(tok[e - 1])) {
      --e;
      continue;
    }
    if (e >= b + 3 && utf8_punct_len(tok, e - 3) == 3) {
      e -= 3;
      continue;
    }
    break;
  }
  return {b, e};
}

}  // namespace text

namespace {

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kSet = [] {
    std::unordered_set<std::string> s;
    for (const auto& line : split(data::abbreviations(), '\n')) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      s.insert(t);
    }
    return s;
  }();
  return kSet;
}

bool is_terminal_at(std::string_view s, std::size_t i, std::size_t* len) {
  const char c = s[i];
  if (c == '.' || c == '?' || c == '!') {
    *len = 1;
    return true;
  }
  if (text::utf8_punct_len(s, i) == 3 && static_cast<unsigned char>(s[i + 2]) == 0xA6) {
    *len = 3;
    return true;
  }
  return false;
}

bool is_closing_at(std::string_view s, std::size_t i, std::size_t* len) {
  const char c = s[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') {
    *len = 1;
    return true;
  }
  if (text::utf8_punct_len(s, i) == 3) {
    const auto b = static_cast<unsigned char>(s[i + 2]);
    if (b == 0x99 || b == 0x9D) {
      *len = 3;
      return true;
    }
  }
  return false;
}

// Word ending at position `dot` (inclusive), lowercased, leading punctuation
// removed.
std::string word_before(std::string_view s, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  std::string w = to_lower_ascii(s.substr(b, dot + 1 - b));
  std::size_t lead = 0;
  while (lead < w.size() && (w[lead] == '(' || w[lead] == '"' || w[lead] == '\'' ||
                             w[lead] == '[')) {
    ++lead;
  }
  return w.substr(lead);
}

bool is_abbreviation(const std::string& word) {
  if (abbreviations().count(word)) return true;
  // Single-letter initial: "W."
  return word.size() == 2 && std::isalpha(static_cast<unsigned char>(word[0]));
}

bool starts_new_sentence(std::string_view s, std::size_t k) {
  const auto c = static_cast<unsigned char>(s[k]);
  if (std::islower(c)) return false;
  if (c == ',' || c == ';' || c == ':' || c == '-' || c == '.' || c == '?' ||
      c == '!') {
    return false;
  }
  std::size_t len = 0;
  if (is_terminal_at(s, k, &len)) return false;
  return true;
}

}  // namespace

std::vector<std::string> segment(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto flush = [&](std::size_t end) {
    std::string piece = trim(text.substr(start, end - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    start = end;
  };
  while (i < n) {
    std::size_t len = 0;
    if (!is_terminal_at(text, i, &len)) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    std::size_t j = i + len;
    bool single_period = text[i] == '.';
    while (j < n) {
      if (is_terminal_at(text, j, &len)) {
        single_period = false;
        j += len;
      } else if (is_closing_at(text, j, &len)) {
        j += len;
      } else {
        break;
      }
    }
    i = j;
    if (j >= n || !std::isspace(static_cast<unsigned char>(text[j]))) continue;
    std::size_t k = j;
    while (k < n && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k >= n || !starts_new_sentence(text, k)) continue;
    if (single_period && is_abbreviation(word_before(text, first))) continue;
    flush(j);
  }
  flush(n);
  if (out.empty()) {
    std::string whole = trim(text);
    if (!whole.empty()) out.push_back(std::move(whole));
  }
  return out;
}

const ContractionTable& ContractionTable::bundled() {
  static const ContractionTable kTable = parse(data::contractions());
  return kTable;
}

ContractionTable ContractionTable::parse(std::string_view tsv) {
  ContractionTable table;
  int line_no = 0;
  for (const auto& raw : split(tsv, '\n')) {
    ++line_no;
    if (raw.empty() || raw[0] == '#') continue;
    const auto tab = raw.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(fmt::format("contraction table line {}: missing tab", line_no));
    }
    std::string key = raw.substr(0, tab);
    std::string value = raw.substr(tab + 1);
    if (!value.empty() && value.back() == '\r') value.pop_back();
    if (key.find('\'') == std::string::npos) {
      throw ParseError(fmt::format(
          "contraction table line {}: key '{}' has no apostrophe", line_no, key));
    }
    if (key[0] == '~') {
      table.suffixes_.emplace_back(key.substr(1), std::move(value));
    } else {
      table.exact_.emplace(std::move(key), std::move(value));
    }
  }
  return table;
}

std::optional<std::string> ContractionTable::expand(std::string_view token) const {
  if (auto it = exact_.find(std::string(token)); it != exact_.end()) return it->second;
  for (const auto& [suffix, expansion] : suffixes_) {
    if (token.size() > suffix.size() &&
        token.substr(token.size() - suffix.size()) == suffix) {
      return std::string(token.substr(0, token.size() - suffix.size())) + expansion;
    }
  }
  return std::nullopt;
}

std::string normalize(std::string_view text) {
  return normalize(text, ContractionTable::bundled());
}

std::string normalize(std::string_view text, const ContractionTable& table) {
  // Curly apostrophes become ASCII; dashes become word breaks.
  std::string prepared;
  prepared.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text::utf8_punct_len(text, i) == 3) {
      const auto b = static_cast<unsigned char>(text[i + 2]);
      if (b == 0x98 || b == 0x99) {
        prepared.push_back('\'');
      } else if (b == 0x93 || b == 0x94) {
        prepared.push_back(' ');
      } else {
        prepared.append(text.substr(i, 3));
      }
      i += 3;
      continue;
    }
    const char c = text[i];
    prepared.push_back(c == '-' ? ' ' : c);
    ++i;
  }

  std::vector<std::string> words;
  for (const auto& tok : split_whitespace(prepared)) {
    const auto [b, e] = text::core_bounds(tok);
    const std::string core = to_lower_ascii(std::string_view(tok).substr(b, e - b));
    std::string expanded = core;
    if (auto x = table.expand(core)) expanded = *x;
    for (const auto& piece : split_whitespace(expanded)) {
      std::string clean;
      for (std::size_t i = 0; i < piece.size();) {
        const std::size_t p = text::punct_len(piece, i);
        if (p) {
          i += p;
          continue;
        }
        clean.push_back(piece[i]);
        ++i;
      }
      if (!clean.empty()) words.push_back(std::move(clean));
    }
  }
  return join(words, " ");
}

std::string mask_spans(std::string_view text, std::vector<EntitySpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const EntitySpan& a, const EntitySpan& b) {
    return a.begin < b.begin || (a.begin == b.begin && a.end < b.end);
  });
  std::string out;
  std::size_t pos = 0;
  for (const auto& sp : spans) {
    if (sp.begin >= sp.end || sp.end > text.size()) {
      throw Error(fmt::format("entity span [{}, {}) is empty or out of range", sp.begin,
                              sp.end));
    }
    if (sp.begin < pos) {
      throw Error(fmt::format("entity span [{}, {}) overlaps the previous span", sp.begin,
                              sp.end));
    }
    out.append(text.substr(pos, sp.begin - pos));
    out.append(kMaskToken);
    pos = sp.end;
  }
  out.append(text.substr(pos));
  return out;
}

std::string mask_entities(std::string_view text, const EntityProvider& ner) {
  return mask_spans(text, ner.find(text));
}

std::vector<EntitySpan> CapitalizedRunTagger::find(std::string_view text) const {
  std::vector<EntitySpan> spans;
  const auto tokens = text::tokenize_with_offsets(text);
  std::optional<EntitySpan> run;
  auto close = [&] {
    if (run) spans.push_back(*run);
    run.reset();
  };
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::string_view tok = text.substr(tokens[t].begin, tokens[t].end - tokens[t].begin);
    auto [b, e] = text::core_bounds(tok);
    std::string_view core = tok.substr(b, e - b);
    bool possessive = false;
    for (std::string_view suf : {std::string_view("'s"), std::string_view("\xE2\x80\x99s")}) {
      if (core.size() > suf.size() && core.substr(core.size() - suf.size()) == suf) {
        core.remove_suffix(suf.size());
        e = b + core.size();
        possessive = true;
        break;
      }
    }
    const bool is_pronoun_i =
        core == "I" || core.starts_with("I'") || core.starts_with("I\xE2\x80\x99");
    const bool capitalized = t > 0 && !core.empty() &&
                             std::isupper(static_cast<unsigned char>(core[0])) &&
                             !is_pronoun_i;
    if (!capitalized) {
      close();
      continue;
    }
    const std::size_t abs_b = tokens[t].begin + b;
    const std::size_t abs_e = tokens[t].begin + e;
    if (run) {
      run->end = abs_e;
    } else {
      run = EntitySpan{abs_b, abs_e};
    }
    const std::string lowered = to_lower_ascii(tok.substr(b));
    const bool abbreviation = abbreviations().count(lowered) > 0;
    const bool trailing_punct = e < tok.size();
    if (abbreviation) {
      // Keep the period inside the span so "Mr. Smith" masks as one entity.
      run->end = tokens[t].end;
      continue;
    }
    if (trailing_punct || possessive) close();
  }
  close();
  return spans;
}

std::vector<std::string> bundled_audience_stoplist() {
  std::vector<std::string> out;
  for (const auto& line : split(data::audience_stoplist(), '\n')) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(t);
  }
  return out;
}

std::string strip_audience_annotations(std::string_view text,
                                       const std::vector<std::string>& stoplist,
                                       std::size_t* removed) {
  std::string out;
  std::size_t i = 0;
  std::size_t count = 0;
  while (i < text.size()) {
    const char open = text[i];
    if (open == '(' || open == '[') {
      const char closer = open == '(' ? ')' : ']';
      const auto end = text.find(closer, i + 1);
      if (end != std::string_view::npos) {
        std::string inner = to_lower_ascii(trim(text.substr(i + 1, end - i - 1)));
        while (!inner.empty() && (inner.back() == '.' || inner.back() == '!')) {
          inner.pop_back();
        }
        if (std::find(stoplist.begin(), stoplist.end(), inner) != stoplist.end()) {
          ++count;
          i = end + 1;
          if (!out.empty() && out.back() == ' ') {
            while (i < text.size() && text[i] == ' ') ++i;
          }
          continue;
        }
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  if (removed) *removed = count;
  return trim(out);
}

}  // namespace rhetoric
