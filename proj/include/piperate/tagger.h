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

// Token taggers (dictionary and Bi-LSTM) and the per-sentence entity frames
// built from their output.

#ifndef PIPERATE_TAGGER_H_
#define PIPERATE_TAGGER_H_

#include <filesystem>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "piperate/bilstm.h"
#include "piperate/corpus.h"
#include "piperate/lexicon.h"
#include "piperate/tags.h"

namespace piperate {

Tag category_tag(Category c);
EntityType tag_entity_type(Tag t);

// Lexicon lookup over the normalized tokens; matched tokens take their
// category's tag, everything else is O.
std::vector<Tag> dictionary_tag(const Sentence& sentence, const Lexicon& lexicon);

std::vector<std::string> normalized_words(const Sentence& sentence);

// Number-plus-unit patterns for sizes and distances. Each rule is a regular
// expression over the space-joined normalized tokens; capture group 1 is the
// entity and must start and end on token boundaries.
class PatternTable {
 public:
  struct Rule {
    EntityType type;
    std::string pattern;
    std::regex regex;
  };
  struct Match {
    EntityType type;
    TokenRange range;
  };

  static PatternTable defaults();
  // "TYPE TAB regex" per line, TYPE one of the entity type names.
  static PatternTable parse(std::string_view text);
  static PatternTable load(const std::filesystem::path& path);

  void add(EntityType type, std::string pattern);
  const std::vector<Rule>& rules() const { return rules_; }

  // Non-overlapping matches; earlier rules win.
  std::vector<Match> match(const std::vector<std::string>& words) const;

 private:
  std::vector<Rule> rules_;
};

struct Entity {
  EntityType type = EntityType::kDefect;
  TokenRange range;
  bool negated = false;
  // Lexicon terms of the entity's category found inside the range.
  std::vector<LexiconMatch> matches;
  // Normalized tokens joined by spaces.
  std::string text;
  // Offsets into the raw document.
  CharSpan source_span;
  // "dict", "bilstm" or "pattern".
  std::string provenance;
};

struct EntityFrame {
  std::size_t sentence_index = 0;
  std::vector<Entity> defects;
  std::vector<Entity> sizes;
  std::vector<Entity> locations;
  std::vector<Entity> frequencies;

  std::vector<Entity>& list(EntityType type);
  const std::vector<Entity>& list(EntityType type) const;
  void add(Entity e) { list(e.type).push_back(std::move(e)); }
  std::size_t size() const { return defects.size() + sizes.size() + locations.size() + frequencies.size(); }
  // Entities ordered by token position.
  std::vector<const Entity*> all() const;
};

// Pattern matches become Size/Location entities and their tokens are
// masked to O; the remaining maximal runs of one non-O tag become entities
// of that tag's type. An entity is negated iff it intersects a negation
// scope.
EntityFrame extract_entities(const Sentence& sentence, const std::vector<Tag>& tags, const PatternTable& patterns,
                             const Lexicon& lexicon, std::string_view provenance);

class EntityTagger {
 public:
  virtual ~EntityTagger() = default;
  virtual std::vector<Tag> tag(const Sentence& sentence) const = 0;
  virtual std::string_view name() const = 0;
};

class DictionaryTagger : public EntityTagger {
 public:
  explicit DictionaryTagger(const Lexicon& lexicon) : lexicon_(lexicon) {}
  std::vector<Tag> tag(const Sentence& sentence) const override { return dictionary_tag(sentence, lexicon_); }
  std::string_view name() const override { return "dict"; }

 private:
  const Lexicon& lexicon_;
};

// Dictionary tags feed the model as features.
std::vector<Tag> predict_tags(const Sentence& sentence, const Lexicon& lexicon, const TaggerModel& model);

class BiLstmTagger : public EntityTagger {
 public:
  BiLstmTagger(const Lexicon& lexicon, const TaggerModel& model) : lexicon_(lexicon), model_(model) {}
  std::vector<Tag> tag(const Sentence& sentence) const override;
  std::string_view name() const override { return "bilstm"; }

 private:
  const Lexicon& lexicon_;
  const TaggerModel& model_;
};

// Gold tags for training: tokens overlapping a gold Defect, Location or
// Frequency span take that tag. Size spans and tokens covered by a pattern
// match are O, since extraction handles them outside the model.
TrainingExample make_training_example(const Sentence& sentence, const std::vector<GoldEntity>& gold,
                                      const Lexicon& lexicon, const PatternTable& patterns);

}  // namespace piperate

#endif  // PIPERATE_TAGGER_H_
