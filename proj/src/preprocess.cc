// Copyright 2026 The piperate Authors.
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

#include "piperate/preprocess.h"

#include <algorithm>
#include <utility>

#include "piperate/error.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_kept(char c) { return is_word_char(c) || is_terminator(c); }

std::vector<std::vector<std::string>> split_phrases(const std::vector<std::string>& phrases) {
  std::vector<std::vector<std::string>> out;
  for (const auto& p : phrases) {
    std::vector<std::string> words;
    for (auto w : split(p, ' ')) {
      if (!w.empty()) words.emplace_back(w);
    }
    if (!words.empty()) out.push_back(std::move(words));
  }
  // Longest phrases first so "no evidence of" wins over "no".
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

std::size_t match_phrase(const std::vector<Token>& tokens, std::size_t at,
                         const std::vector<std::vector<std::string>>& phrases) {
  for (const auto& words : phrases) {
    if (at + words.size() > tokens.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < words.size() && ok; ++k) ok = tokens[at + k].normalized == words[k];
    if (ok) return words.size();
  }
  return 0;
}

std::vector<std::string> phrase_lines(const std::filesystem::path& path,
                                      std::vector<std::string>* second = nullptr) {
  std::vector<std::string> first;
  std::vector<std::string>* active = &first;
  const std::string text = read_file(path);
  for (auto line : split_lines(text)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[pre]") {
      active = &first;
      continue;
    }
    if (line == "[terminators]") {
      if (!second) throw Error(ErrorCode::kConfigError, "unexpected section in " + path.string());
      active = second;
      continue;
    }
    active->push_back(to_lower(line));
  }
  return first;
}

}  // namespace

NormalizedText normalize_with_offsets(std::string_view raw, std::size_t base_offset) {
  NormalizedText out;
  out.text.reserve(raw.size());
  out.offsets.reserve(raw.size());
  bool pending_space = false;
  std::size_t space_at = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (!is_kept(c)) {
      if (!pending_space) space_at = i;
      pending_space = true;
      continue;
    }
    if (pending_space && !out.text.empty()) {
      out.text.push_back(' ');
      out.offsets.push_back(base_offset + space_at);
    }
    pending_space = false;
    out.text.push_back(c);
    out.offsets.push_back(base_offset + i);
  }
  return out;
}

std::string normalize_text(std::string_view raw) { return normalize_with_offsets(raw).text; }

AbbreviationList AbbreviationList::defaults() {
  AbbreviationList list;
  list.words = {"ft.",  "in.",  "no.",  "approx.", "e.g.", "i.e.", "etc.", "vs.",  "dia.",
                "st.",  "min.", "max.", "avg.",    "sq.",  "lb.",  "mr.",  "dr.",  "ref.",
                "est.", "yd.",  "mm.",  "cm.",     "m.",   "sta.", "lf.",  "deg."};
  return list;
}

AbbreviationList AbbreviationList::load(const std::filesystem::path& path) {
  AbbreviationList list;
  list.words = load_word_list(path);
  return list;
}

bool AbbreviationList::contains(std::string_view word) const {
  return words.count(to_lower(word)) > 0;
}

std::vector<CharSpan> split_sentence_spans(std::string_view text, const AbbreviationList& abbreviations) {
  std::vector<CharSpan> spans;
  std::size_t start = 0;
  while (start < text.size() && is_space(text[start])) ++start;
  std::size_t i = start;
  while (i < text.size()) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_terminator(text[j])) ++j;
    bool boundary = false;
    if (j == text.size()) {
      boundary = true;
    } else if (is_space(text[j])) {
      std::size_t k = j;
      while (k < text.size() && is_space(text[k])) ++k;
      boundary = k < text.size() && is_ascii_upper(text[k]);
      if (boundary && j - i == 1 && text[i] == '.') {
        std::size_t w = i;
        while (w > start && !is_space(text[w - 1])) --w;
        if (abbreviations.contains(text.substr(w, j - w))) boundary = false;
      }
    }
    if (boundary) {
      spans.push_back({start, j});
      start = j;
      while (start < text.size() && is_space(text[start])) ++start;
    }
    i = std::max(j, start);
  }
  if (start < text.size()) {
    std::size_t end = text.size();
    while (end > start && is_space(text[end - 1])) --end;
    if (end > start) spans.push_back({start, end});
  }
  return spans;
}

std::vector<std::string> split_sentences(std::string_view text, const AbbreviationList& abbreviations) {
  std::vector<std::string> out;
  for (const auto& s : split_sentence_spans(text, abbreviations)) {
    out.emplace_back(text.substr(s.begin, s.size()));
  }
  return out;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    if (i == sentence.size()) break;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    Token t;
    t.char_span = {i, j};
    tokens.push_back(std::move(t));
    i = j;
  }
  if (!tokens.empty()) {
    auto& last = tokens.back();
    std::size_t cut = last.char_span.end;
    while (cut > last.char_span.begin && is_terminator(sentence[cut - 1])) --cut;
    if (cut > last.char_span.begin && cut < last.char_span.end) {
      Token punct;
      punct.char_span = {cut, last.char_span.end};
      last.char_span.end = cut;
      tokens.push_back(std::move(punct));
    }
  }
  for (auto& t : tokens) {
    t.surface = std::string(sentence.substr(t.char_span.begin, t.char_span.size()));
    t.normalized = to_lower(t.surface);
    // Abbreviations keep their period in the surface only ("ft." -> "ft").
    if (t.normalized.size() > 1 && t.normalized.back() == '.' &&
        is_word_char(t.normalized[t.normalized.size() - 2])) {
      t.normalized.pop_back();
    }
  }
  return tokens;
}

int edit_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

Token correct_spelling(const Token& token, const SpellVocabulary& vocab) {
  Token out = token;
  const std::string& word = token.normalized;
  if (vocab.known_terms.empty() || vocab.contains(word) || word.size() < vocab.min_word_length) {
    return out;
  }
  for (char c : word) {
    if (!(c >= 'a' && c <= 'z')) return out;
  }
  const int limit = std::clamp(vocab.max_edit_distance, 1, 2);
  int best = limit + 1;
  const std::string* best_term = nullptr;
  // known_terms is ordered, so the first term at the best distance is the
  // lexicographically smallest.
  for (const auto& term : vocab.known_terms) {
    const std::size_t la = term.size();
    const std::size_t lb = word.size();
    if ((la > lb ? la - lb : lb - la) > static_cast<std::size_t>(limit)) continue;
    const int d = edit_distance(word, term);
    if (d < best) {
      best = d;
      best_term = &term;
    }
  }
  if (best_term) out.normalized = *best_term;
  return out;
}

NegationTriggerSet NegationTriggerSet::defaults() {
  NegationTriggerSet set;
  set.pre_triggers = {"no",       "not",           "without",      "free of",
                      "absence of", "no evidence of", "no sign of", "no signs of",
                      "never",    "neither",       "nor",          "negative for"};
  set.scope_terminators = {"but", ";", "however", "although", "though", "except",
                           "apart from", "aside from", "yet", "which", "whereas"};
  return set;
}

NegationTriggerSet NegationTriggerSet::load(const std::filesystem::path& path) {
  NegationTriggerSet set;
  set.pre_triggers = phrase_lines(path, &set.scope_terminators);
  if (set.pre_triggers.empty()) {
    throw Error(ErrorCode::kConfigError, "no negation triggers in " + path.string());
  }
  return set;
}

std::vector<TokenRange> detect_negation(const std::vector<Token>& tokens, const NegationTriggerSet& triggers) {
  const auto pre = split_phrases(triggers.pre_triggers);
  const auto stop = split_phrases(triggers.scope_terminators);
  std::vector<TokenRange> scopes;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t len = match_phrase(tokens, i, pre);
    if (len == 0) continue;
    const std::size_t begin = i + len;
    std::size_t end = std::min(tokens.size(), begin + triggers.window);
    for (std::size_t k = begin; k < end; ++k) {
      if (match_phrase(tokens, k, stop) > 0) {
        end = k;
        break;
      }
    }
    if (begin < end) scopes.push_back({begin, end});
  }
  std::sort(scopes.begin(), scopes.end(),
            [](const TokenRange& a, const TokenRange& b) { return a.begin < b.begin; });
  std::vector<TokenRange> merged;
  for (const auto& s : scopes) {
    if (!merged.empty() && s.begin <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

Preprocessor::Preprocessor(NegationTriggerSet triggers, AbbreviationList abbreviations, SpellVocabulary vocab)
    : triggers_(std::move(triggers)), abbreviations_(std::move(abbreviations)), vocab_(std::move(vocab)) {}

Sentence Preprocessor::make_sentence(std::string text) const {
  Sentence s;
  s.text = std::move(text);
  s.tokens = tokenize(s.text);
  for (auto& t : s.tokens) t = correct_spelling(t, vocab_);
  s.negation_scopes = detect_negation(s.tokens, triggers_);
  return s;
}

void Preprocessor::process(Document& doc) const {
  doc.sentences.clear();
  for (const auto& section : doc.sections) {
    const NormalizedText norm = normalize_with_offsets(section.body, section.offset);
    for (const auto& span : split_sentence_spans(norm.text, abbreviations_)) {
      Sentence s = make_sentence(norm.text.substr(span.begin, span.size()));
      s.section = section.name;
      s.source_span = {norm.offsets[span.begin], norm.offsets[span.end - 1] + 1};
      for (auto& t : s.tokens) {
        const std::size_t b = span.begin + t.char_span.begin;
        const std::size_t e = span.begin + t.char_span.end;
        t.source_span = {norm.offsets[b], norm.offsets[e - 1] + 1};
      }
      doc.sentences.push_back(std::move(s));
    }
  }
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
  std::set<std::string> words;
  const std::string text = read_file(path);
  for (auto line : split_lines(text)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    words.insert(to_lower(line));
  }
  return words;
}

}  // namespace piperate
