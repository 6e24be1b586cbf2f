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

#include "piperate/pipeline.h"

#include <utility>

namespace piperate {

SpellVocabulary make_spell_vocabulary(const Lexicon& lexicon, const std::set<std::string>& base_words) {
  SpellVocabulary vocab;
  vocab.known_terms = lexicon.words();
  vocab.known_terms.insert(base_words.begin(), base_words.end());
  return vocab;
}

Analyzer::Analyzer(Resources resources)
    : resources_(std::move(resources)),
      preprocessor_(resources_.triggers, resources_.abbreviations,
                    make_spell_vocabulary(resources_.lexicon, resources_.base_words)) {}

void Analyzer::process(Document& doc) const { preprocessor_.process(doc); }

Document Analyzer::prepare(std::string raw, std::string id) const {
  Document doc = parse_document(std::move(raw), std::move(id));
  process(doc);
  return doc;
}

std::vector<EntityFrame> Analyzer::frames(const Document& doc, const EntityTagger& tagger) const {
  std::vector<EntityFrame> out;
  out.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Sentence& s = doc.sentences[i];
    EntityFrame f = extract_entities(s, tagger.tag(s), resources_.patterns, resources_.lexicon, tagger.name());
    f.sentence_index = i;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<TrainingExample> training_examples(const Document& doc, const std::vector<GoldEntity>& gold,
                                               const Analyzer& analyzer) {
  std::vector<TrainingExample> out;
  for (const auto& s : doc.sentences) {
    if (s.tokens.empty()) continue;
    out.push_back(make_training_example(s, gold, analyzer.resources().lexicon, analyzer.resources().patterns));
  }
  return out;
}

}  // namespace piperate
