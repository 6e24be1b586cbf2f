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

// Shared wiring from raw text to entity frames.

#ifndef PIPERATE_PIPELINE_H_
#define PIPERATE_PIPELINE_H_

#include <set>
#include <string>
#include <vector>

#include "piperate/bilstm.h"
#include "piperate/corpus.h"
#include "piperate/lexicon.h"
#include "piperate/preprocess.h"
#include "piperate/rating.h"
#include "piperate/tagger.h"

namespace piperate {

struct Resources {
  Lexicon lexicon;
  NegationTriggerSet triggers = NegationTriggerSet::defaults();
  AbbreviationList abbreviations = AbbreviationList::defaults();
  // Ordinary words the spelling corrector must leave alone.
  std::set<std::string> base_words;
  PatternTable patterns = PatternTable::defaults();
  WeightTables weights = WeightTables::defaults();
};

// Every lexicon word plus the base words.
SpellVocabulary make_spell_vocabulary(const Lexicon& lexicon, const std::set<std::string>& base_words);

class Analyzer {
 public:
  explicit Analyzer(Resources resources);

  // Fills doc.sentences, replacing any previous content.
  void process(Document& doc) const;
  Document prepare(std::string raw, std::string id) const;

  // One frame per sentence of a processed document.
  std::vector<EntityFrame> frames(const Document& doc, const EntityTagger& tagger) const;

  const Resources& resources() const { return resources_; }
  const Preprocessor& preprocessor() const { return preprocessor_; }

 private:
  Resources resources_;
  Preprocessor preprocessor_;
};

// Training sentences of a processed document with tags from its gold spans.
std::vector<TrainingExample> training_examples(const Document& doc, const std::vector<GoldEntity>& gold,
                                               const Analyzer& analyzer);

}  // namespace piperate

#endif  // PIPERATE_PIPELINE_H_
