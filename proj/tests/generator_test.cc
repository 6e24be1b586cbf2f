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

#include "piperate/generator.h"

#include <map>
#include <string>

#include "doctest.h"
#include "piperate/error.h"
#include "piperate/evaluation.h"
#include "piperate/rating.h"
#include "piperate/tagger.h"
#include "test_util.h"

namespace piperate {
namespace {

using testing::error_code_of;

GeneratedCorpus small_corpus(std::size_t n, std::uint64_t seed) {
  GeneratorConfig config;
  config.documents = n;
  return generate_synthetic_corpus(config, testing::shipped_analyzer(), seed);
}

TEST_CASE("zero documents") {
  const GeneratedCorpus c = small_corpus(0, 1);
  CHECK(c.documents.empty());
  CHECK(c.gold.empty());
}

TEST_CASE("an empty lexicon is rejected") {
  const Analyzer bare{Resources{}};
  CHECK(error_code_of([&] { generate_synthetic_corpus({}, bare, 1); }) == ErrorCode::kLexiconRequired);
}

TEST_CASE("same seed, same corpus") {
  const GeneratedCorpus a = small_corpus(30, 5);
  const GeneratedCorpus b = small_corpus(30, 5);
  const GeneratedCorpus c = small_corpus(30, 6);
  REQUIRE(a.documents.size() == 30);
  bool differs = false;
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(a.documents[i].raw == b.documents[i].raw);
    CHECK(a.gold[i] == b.gold[i]);
    differs |= a.documents[i].raw != c.documents[i].raw;
  }
  CHECK(differs);
  CHECK(a.documents[0].id == "doc0001");
}

TEST_CASE("gold spans and ratings agree with the dictionary pipeline") {
  const Analyzer& an = testing::shipped_analyzer();
  const DictionaryTagger tagger(an.resources().lexicon);
  const GeneratedCorpus c = small_corpus(120, 9);
  std::map<int, int> seen;
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    const Document& doc = c.documents[i];
    const GoldRecord& g = c.gold[i];
    CHECK(g.document_id == doc.id);
    CHECK(g.annotator_id == "synthetic");
    ++seen[g.rating];
    for (const auto& e : g.entities) CHECK(e.span.end <= doc.raw.size());
    const RatingReport r = rate_document(doc, an, tagger);
    CHECK(r.rating.value == g.rating);
    Document processed = doc;
    an.process(processed);
    CHECK(token_labels(processed, report_spans(r)) == token_labels(processed, g.entities));
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("a frequent leak at a keyword location rates 5") {
  const Analyzer& an = testing::shipped_analyzer();
  const DictionaryTagger tagger(an.resources().lexicon);
  const RatingReport r = rate_document(parse_document("Frequently, leaks at midpoint.", "m"), an, tagger);
  CHECK(r.weights == WeightTriple{0.99, 0.9, 0.8});
  CHECK(r.rating.value == 5);
}

TEST_CASE("a negated sentence never raises a rating") {
  const Analyzer& an = testing::shipped_analyzer();
  const DictionaryTagger tagger(an.resources().lexicon);
  const GeneratedCorpus c = small_corpus(200, 21);
  for (const auto& doc : c.documents) {
    const int before = rate_document(doc, an, tagger).rating.value;
    const Document more = parse_document(doc.raw + "\nNo leaks and no defects.\n", doc.id);
    CHECK(rate_document(more, an, tagger).rating.value <= before);
  }
}

TEST_CASE("gold frames skip negated mentions") {
  LexiconEntry leak{"leak", Category::kDefect, Origin::kSeed, 0, "leak"};
  LexiconEntry often{"frequently", Category::kFrequency, Origin::kSeed, 0, "frequently"};
  const std::vector<GoldMention> mentions = {
      {{EntityType::kDefect, {0, 4}}, 0, false, leak},
      {{EntityType::kFrequencyOfDefects, {5, 15}}, 0, false, often},
      {{EntityType::kDefect, {20, 24}}, 1, true, leak},
  };
  const auto frames = gold_frames(mentions);
  const RatingOutcome o = rate_frames(frames);
  CHECK(o.weights == WeightTriple{0.99, 1.0, 0.8});
  CHECK(o.rating.value == 5);
}

}  // namespace
}  // namespace piperate
