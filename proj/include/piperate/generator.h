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

// Synthetic inspection reports with exact gold spans, drawn from the
// lexicon. Gold ratings come from the rating engine applied to the gold
// entities.

#ifndef PIPERATE_GENERATOR_H_
#define PIPERATE_GENERATOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "piperate/corpus.h"
#include "piperate/pipeline.h"

namespace piperate {

struct GeneratorConfig {
  std::size_t documents = 500;
  std::string id_prefix = "doc";
  std::string annotator = "synthetic";
  // Relative weights of the target ratings 1..5.
  std::array<double, 5> rating_weights = {1, 1, 1, 1, 1};
  // Relative weights of the location cases: none, one keyword, one
  // distance, multiple.
  std::array<double, 4> location_weights = {1, 1, 1, 1};
  double negated_sentence_probability = 0.4;
  double size_probability = 0.25;
  // Per defect or frequency word; only typos the corrector undoes are kept.
  double typo_probability = 0.05;
  std::size_t max_filler_sentences = 3;
};

struct GeneratedCorpus {
  std::vector<Document> documents;
  std::vector<GoldRecord> gold;
};

// Throws LexiconRequired if the analyzer's lexicon is empty or lacks a
// category the templates need, and InvalidArgument if a template word
// would itself be tagged or spell-corrected.
GeneratedCorpus generate_synthetic_corpus(const GeneratorConfig& config, const Analyzer& analyzer,
                                          std::uint64_t seed);

// Builds the gold frames of a generated document, as the rating engine
// sees them. Exposed for tests.
struct GoldMention {
  GoldEntity entity;
  std::size_t sentence = 0;
  bool negated = false;
  // Lexicon entry behind the mention; empty term for pattern mentions.
  LexiconEntry entry;
};
std::vector<EntityFrame> gold_frames(const std::vector<GoldMention>& mentions);

}  // namespace piperate

#endif  // PIPERATE_GENERATOR_H_
