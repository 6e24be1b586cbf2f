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

#include <string>
#include <vector>

#include "doctest.h"
#include "piperate/random.h"
#include "test_util.h"

namespace piperate {
namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<Token> tokens_of(const std::string& s) { return tokenize(s); }

TEST_CASE("normalize_text drops special characters") {
  CHECK(normalize_text("leaks, cracks, & holes") == "leaks cracks holes");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("###") == "");
  CHECK(normalize_text("  Sag   at\t10 ft.  ") == "Sag at 10 ft.");
  CHECK(normalize_text("What? Yes!") == "What? Yes!");
}

TEST_CASE("normalize_text is idempotent") {
  Rng rng(11);
  const std::string alphabet = "ab ,.!?#&\t\nZ9-";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (std::uint64_t n = rng.below(30); n > 0; --n) s += alphabet[rng.below(alphabet.size())];
    const std::string once = normalize_text(s);
    CHECK(normalize_text(once) == once);
  }
}

TEST_CASE("normalize_with_offsets maps back to kept characters") {
  const std::string raw = "a, b&&c";
  const auto n = normalize_with_offsets(raw, 10);
  CHECK(n.text == "a b c");
  REQUIRE(n.offsets.size() == n.text.size());
  for (std::size_t i = 0; i < n.text.size(); ++i) {
    if (n.text[i] != ' ') CHECK(raw[n.offsets[i] - 10] == n.text[i]);
  }
}

TEST_CASE("sentence splitting") {
  CHECK(split_sentences("No leaks. Minor sag at 10 ft.").size() == 2);
  CHECK(split_sentences("Pipe at 10 ft. From inlet leaks.").size() == 1);
  CHECK(split_sentences("Pipe at 10 ft. from inlet leaks.").size() == 1);
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("One! Two? Three.") == std::vector<std::string>{"One!", "Two?", "Three."});
}

TEST_CASE("sentence spans cover the input apart from separators") {
  const std::string text = "No leaks. Minor sag at 10 ft. From inlet. Done";
  const auto spans = split_sentence_spans(text, AbbreviationList::defaults());
  std::string joined;
  for (const auto& s : spans) joined += text.substr(s.begin, s.size()) + " ";
  joined.pop_back();
  CHECK(joined == text);
}

TEST_CASE("tokenize") {
  CHECK(surfaces(tokens_of("Frequent leaks.")) == std::vector<std::string>{"Frequent", "leaks", "."});
  const auto t = tokens_of("10 feet away");
  REQUIRE(t.size() == 3);
  CHECK(t[0].char_span == CharSpan{0, 2});
  CHECK(t[1].char_span == CharSpan{3, 7});
  CHECK(t[2].char_span == CharSpan{8, 12});
  CHECK(tokens_of("").empty());
  CHECK(tokens_of("LEAKS")[0].normalized == "leaks");
  CHECK(tokens_of("at 10 ft.")[2].normalized == "ft");
}

TEST_CASE("token spans reproduce the sentence") {
  const std::string s = "Very Frequently, there is a leakage at 10 feet!";
  std::string rebuilt(s.size(), ' ');
  for (const auto& t : tokens_of(s)) {
    CHECK(t.char_span.end > t.char_span.begin);
    rebuilt.replace(t.char_span.begin, t.char_span.size(), t.surface);
  }
  CHECK(rebuilt == s);
}

SpellVocabulary vocab(std::set<std::string> words) {
  SpellVocabulary v;
  v.known_terms = std::move(words);
  return v;
}

Token word(const std::string& w) { return tokens_of(w).at(0); }

TEST_CASE("spelling correction") {
  const auto v = vocab({"leaks", "cracks", "sags", "rupture"});
  CHECK(correct_spelling(word("Laeks"), v).normalized == "leaks");
  const Token laeks = correct_spelling(word("Laeks"), v);
  CHECK(laeks.surface == "Laeks");
  CHECK(laeks.char_span == CharSpan{0, 5});
  CHECK(correct_spelling(word("leaks"), v).normalized == "leaks");
  CHECK(correct_spelling(word("xyzq"), v).normalized == "xyzq");
  // Short words are never corrected.
  CHECK(correct_spelling(word("leg"), vocab({"leak"})).normalized == "leg");
}

TEST_CASE("spelling correction picks the nearest, then the smallest term") {
  // Independent oracle: scan the vocabulary with edit_distance.
  const auto v = vocab({"crack", "crank", "track", "cracks", "stack", "leak"});
  for (const std::string w : {"craek", "crakc", "trakc", "crackss", "lesk", "stakk", "zzzzzz"}) {
    int best = 3;
    std::string expect = w;
    for (const auto& term : v.known_terms) {
      const int d = edit_distance(w, term);
      if (d < best) {
        best = d;
        expect = term;
      }
    }
    CHECK(correct_spelling(word(w), v).normalized == expect);
  }
}

TEST_CASE("correction is the identity on vocabulary words") {
  const Analyzer& a = testing::shipped_analyzer();
  const SpellVocabulary& v = a.preprocessor().vocabulary();
  for (const auto& term : v.known_terms) {
    if (term.find(' ') != std::string::npos) continue;
    CHECK(correct_spelling(word(term), v).normalized == term);
  }
}

TEST_CASE("edit distance counts transpositions once") {
  CHECK(edit_distance("leaks", "laeks") == 1);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
}

std::vector<TokenRange> scopes(const std::string& s) {
  return detect_negation(tokens_of(s), NegationTriggerSet::defaults());
}

TEST_CASE("negation scopes") {
  CHECK(scopes("no leaks observed") == std::vector<TokenRange>{{1, 3}});
  CHECK(scopes("leaks observed").empty());
  const auto t = tokens_of("no leaks but frequent sags");
  const auto s = scopes("no leaks but frequent sags");
  REQUIRE(s.size() == 1);
  CHECK(s[0] == TokenRange{1, 2});
  CHECK_FALSE(s[0].contains(4));
  // The window stops five tokens after the trigger.
  CHECK(scopes("no a b c d e f g") == std::vector<TokenRange>{{1, 6}});
  CHECK(scopes("there was no evidence of cracks here") == std::vector<TokenRange>{{5, 7}});
}

TEST_CASE("negation scopes are sorted, disjoint and in bounds") {
  Rng rng(5);
  const std::vector<std::string> words = {"no", "leaks", "but", "without", "sags", "free", "of", "cracks", ";"};
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (std::uint64_t n = rng.below(15); n > 0; --n) s += rng.pick(words) + " ";
    const auto toks = tokens_of(s);
    const auto sc = detect_negation(toks, NegationTriggerSet::defaults());
    for (std::size_t k = 0; k < sc.size(); ++k) {
      CHECK(sc[k].begin < sc[k].end);
      CHECK(sc[k].end <= toks.size());
      if (k > 0) CHECK(sc[k - 1].end < sc[k].begin);
    }
  }
}

TEST_CASE("trigger files") {
  const auto t = NegationTriggerSet::load(testing::data_path("negation_triggers.txt"));
  CHECK(t.pre_triggers == NegationTriggerSet::defaults().pre_triggers);
  CHECK(t.scope_terminators == NegationTriggerSet::defaults().scope_terminators);
  CHECK(AbbreviationList::load(testing::data_path("abbreviations.txt")).words == AbbreviationList::defaults().words);
}

TEST_CASE("processing fills sentences with source spans") {
  const Analyzer& a = testing::shipped_analyzer();
  const std::string raw = "Defects:\nNo leaks, observed. Laeks at 10 ft. away\n";
  const Document doc = a.prepare(raw, "p");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].section == "Defects");
  // The scope runs to the sentence end, final period included.
  CHECK(doc.sentences[0].negation_scopes == std::vector<TokenRange>{{1, 4}});
  const Token& laeks = doc.sentences[1].tokens[0];
  CHECK(laeks.normalized == "leaks");
  CHECK(raw.substr(laeks.source_span.begin, laeks.source_span.size()) == "Laeks");
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      CHECK(raw.substr(t.source_span.begin, t.source_span.size()).find(t.surface.substr(0, 1)) == 0);
    }
  }
}

}  // namespace
}  // namespace piperate
