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

// Text normalization, sentence splitting, tokenization, spelling
// correction and NegEx-style negation scopes.

#ifndef PIPERATE_PREPROCESS_H_
#define PIPERATE_PREPROCESS_H_

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "piperate/corpus.h"

namespace piperate {

// Keeps letters, digits, whitespace and . ! ?; every other byte becomes a
// space. Whitespace runs collapse to one space and the ends are trimmed.
std::string normalize_text(std::string_view raw);

struct NormalizedText {
  std::string text;
  // offsets[i] is the input offset that produced text[i].
  std::vector<std::size_t> offsets;
};
NormalizedText normalize_with_offsets(std::string_view raw, std::size_t base_offset = 0);

// Lowercase words with their trailing period, e.g. "ft.".
struct AbbreviationList {
  std::set<std::string> words;

  static AbbreviationList defaults();
  static AbbreviationList load(const std::filesystem::path& path);
  bool contains(std::string_view word) const;
};

// Splits on a run of . ! ? followed by whitespace and an uppercase letter,
// or by end of text. A single '.' closing a listed abbreviation never splits.
std::vector<CharSpan> split_sentence_spans(std::string_view text, const AbbreviationList& abbreviations);
std::vector<std::string> split_sentences(std::string_view text,
                                         const AbbreviationList& abbreviations = AbbreviationList::defaults());

// Whitespace tokens; a trailing . ! ? run on the last token becomes its own
// token. Sets surface, normalized (lowercase) and char_span.
std::vector<Token> tokenize(std::string_view sentence);

struct SpellVocabulary {
  std::set<std::string> known_terms;
  int max_edit_distance = 2;
  // Shorter tokens are never corrected; two edits can turn almost any
  // three-letter word into another.
  std::size_t min_word_length = 4;

  bool contains(std::string_view term) const { return known_terms.count(std::string(term)) > 0; }
};

// Optimal string alignment distance (Levenshtein plus adjacent swaps).
int edit_distance(std::string_view a, std::string_view b);

// Replaces token.normalized with the closest vocabulary term within
// max_edit_distance (ties broken lexicographically). Tokens that are already
// known, contain non-letters, or are shorter than min_word_length are left
// alone.
Token correct_spelling(const Token& token, const SpellVocabulary& vocab);

struct NegationTriggerSet {
  std::vector<std::string> pre_triggers;
  std::vector<std::string> scope_terminators;
  std::size_t window = 5;

  static NegationTriggerSet defaults();
  // Line-based file: "[pre]" and "[terminators]" switch the active list,
  // every other non-comment line is one phrase.
  static NegationTriggerSet load(const std::filesystem::path& path);
};

// Each trigger opens a scope right after itself that runs to the first
// terminator, `window` tokens, or the sentence end, whichever is first.
// Returned ranges are sorted and disjoint.
std::vector<TokenRange> detect_negation(const std::vector<Token>& tokens, const NegationTriggerSet& triggers);

// Fills Document::sentences from the section bodies.
class Preprocessor {
 public:
  Preprocessor(NegationTriggerSet triggers, AbbreviationList abbreviations, SpellVocabulary vocab);

  void process(Document& doc) const;

  // Runs the sentence pipeline on an already-normalized sentence.
  Sentence make_sentence(std::string text) const;

  const SpellVocabulary& vocabulary() const { return vocab_; }
  const NegationTriggerSet& triggers() const { return triggers_; }

 private:
  NegationTriggerSet triggers_;
  AbbreviationList abbreviations_;
  SpellVocabulary vocab_;
};

// One-word-per-line list with '#' comments.
std::set<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace piperate

#endif  // PIPERATE_PREPROCESS_H_
