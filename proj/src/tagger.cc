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

#include "piperate/tagger.h"

#include <algorithm>

#include "piperate/error.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

constexpr std::string_view kNumber = R"(\d+(?:\.\d+)?)";

bool negated(const TokenRange& range, const std::vector<TokenRange>& scopes) {
  return std::any_of(scopes.begin(), scopes.end(), [&](const TokenRange& s) { return s.overlaps(range); });
}

Entity make_entity(const Sentence& s, EntityType type, TokenRange range, std::string_view provenance) {
  Entity e;
  e.type = type;
  e.range = range;
  e.negated = negated(range, s.negation_scopes);
  std::vector<std::string> words;
  for (std::size_t i = range.begin; i < range.end; ++i) words.push_back(s.tokens[i].normalized);
  e.text = join(words, " ");
  e.source_span = {s.tokens[range.begin].source_span.begin, s.tokens[range.end - 1].source_span.end};
  e.provenance = std::string(provenance);
  return e;
}

}  // namespace

Tag category_tag(Category c) {
  switch (c) {
    case Category::kDefect: return Tag::kDefect;
    case Category::kLocation: return Tag::kLocation;
    case Category::kFrequency: return Tag::kFrequency;
  }
  return Tag::kO;
}

EntityType tag_entity_type(Tag t) {
  switch (t) {
    case Tag::kLocation: return EntityType::kLocationOfDefect;
    case Tag::kFrequency: return EntityType::kFrequencyOfDefects;
    default: return EntityType::kDefect;
  }
}

std::vector<std::string> normalized_words(const Sentence& sentence) {
  std::vector<std::string> words;
  words.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) words.push_back(t.normalized);
  return words;
}

std::vector<Tag> dictionary_tag(const Sentence& sentence, const Lexicon& lexicon) {
  std::vector<Tag> tags(sentence.tokens.size(), Tag::kO);
  for (const auto& m : lexicon.lookup(normalized_words(sentence))) {
    for (std::size_t i = m.range.begin; i < m.range.end; ++i) tags[i] = category_tag(m.entry.category);
  }
  return tags;
}

PatternTable PatternTable::defaults() {
  const std::string num(kNumber);
  PatternTable t;
  // Distances: "at 10 feet", "10 ft away".
  t.add(EntityType::kLocationOfDefect,
        "(?:^| )(?:at|from|after|before|about) (" + num + " (?:feet|foot|ft|meters|meter|m|yards|yard))(?: |$)");
  t.add(EntityType::kLocationOfDefect, "(?:^| )(" + num + " (?:feet|foot|ft|meters|meter|m|yards|yard)) away(?: |$)");
  // Sizes: small units, or a long unit followed by a dimension word.
  t.add(EntityType::kSizeOfDefect,
        "(?:^| )(" + num + " (?:inches|inch|in|millimeters|millimeter|mm|centimeters|centimeter|cm))(?: |$)");
  t.add(EntityType::kSizeOfDefect,
        "(?:^| )(" + num + " (?:feet|foot|ft|meters|meter|m)) (?:long|wide|deep|across)(?: |$)");
  return t;
}

void PatternTable::add(EntityType type, std::string pattern) {
  try {
    std::regex re(pattern, std::regex::ECMAScript | std::regex::optimize);
    if (re.mark_count() < 1) throw Error(ErrorCode::kConfigError, "pattern needs a capture group: " + pattern);
    rules_.push_back({type, std::move(pattern), std::move(re)});
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kConfigError, "bad pattern '" + pattern + "': " + e.what());
  }
}

PatternTable PatternTable::parse(std::string_view text) {
  PatternTable t;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw Error(ErrorCode::kConfigError, "pattern line without tab");
    const auto type = parse_entity_type(trim(line.substr(0, tab)));
    if (!type || (*type != EntityType::kSizeOfDefect && *type != EntityType::kLocationOfDefect)) {
      throw Error(ErrorCode::kConfigError, "pattern type must be SizeOfDefect or LocationOfDefect");
    }
    t.add(*type, std::string(trim(line.substr(tab + 1))));
  }
  return t;
}

PatternTable PatternTable::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::vector<PatternTable::Match> PatternTable::match(const std::vector<std::string>& words) const {
  std::string joined;
  std::vector<std::size_t> starts, ends;
  for (const auto& w : words) {
    if (!joined.empty()) joined += ' ';
    starts.push_back(joined.size());
    joined += w;
    ends.push_back(joined.size());
  }
  std::vector<bool> used(words.size(), false);
  std::vector<Match> out;
  for (const auto& rule : rules_) {
    // Each boundary word is consumed by at most one match, so restart the
    // search right after group 1 rather than after the whole match.
    std::size_t from = 0;
    std::smatch m;
    while (from <= joined.size() &&
           std::regex_search(joined.cbegin() + static_cast<std::ptrdiff_t>(from), joined.cend(), m, rule.regex,
                             from > 0 ? std::regex_constants::match_prev_avail : std::regex_constants::match_default)) {
      const std::size_t gb = from + static_cast<std::size_t>(m.position(1));
      const std::size_t ge = gb + static_cast<std::size_t>(m.length(1));
      const auto b = std::find(starts.begin(), starts.end(), gb);
      const auto e = std::find(ends.begin(), ends.end(), ge);
      if (m.length(1) > 0 && b != starts.end() && e != ends.end()) {
        const TokenRange r{static_cast<std::size_t>(b - starts.begin()),
                           static_cast<std::size_t>(e - ends.begin()) + 1};
        bool free = true;
        for (std::size_t i = r.begin; i < r.end; ++i) free = free && !used[i];
        if (free) {
          for (std::size_t i = r.begin; i < r.end; ++i) used[i] = true;
          out.push_back({rule.type, r});
        }
      }
      from = std::max(ge, from + 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) { return a.range.begin < b.range.begin; });
  return out;
}

std::vector<Entity>& EntityFrame::list(EntityType type) {
  switch (type) {
    case EntityType::kDefect: return defects;
    case EntityType::kSizeOfDefect: return sizes;
    case EntityType::kLocationOfDefect: return locations;
    case EntityType::kFrequencyOfDefects: return frequencies;
  }
  return defects;
}

const std::vector<Entity>& EntityFrame::list(EntityType type) const {
  return const_cast<EntityFrame*>(this)->list(type);
}

std::vector<const Entity*> EntityFrame::all() const {
  std::vector<const Entity*> out;
  for (EntityType t : kEntityTypes) {
    for (const auto& e : list(t)) out.push_back(&e);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Entity* a, const Entity* b) { return a->range.begin < b->range.begin; });
  return out;
}

EntityFrame extract_entities(const Sentence& sentence, const std::vector<Tag>& tags, const PatternTable& patterns,
                             const Lexicon& lexicon, std::string_view provenance) {
  if (tags.size() != sentence.tokens.size()) {
    throw Error(ErrorCode::kAlignmentError, "tags and tokens differ in length");
  }
  EntityFrame frame;
  const auto words = normalized_words(sentence);
  std::vector<Tag> masked = tags;
  for (const auto& m : patterns.match(words)) {
    for (std::size_t i = m.range.begin; i < m.range.end; ++i) masked[i] = Tag::kO;
    frame.add(make_entity(sentence, m.type, m.range, "pattern"));
  }
  const auto matches = lexicon.lookup(words);
  std::size_t i = 0;
  while (i < masked.size()) {
    if (masked[i] == Tag::kO) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < masked.size() && masked[j] == masked[i]) ++j;
    Entity e = make_entity(sentence, tag_entity_type(masked[i]), {i, j}, provenance);
    for (const auto& m : matches) {
      if (m.range.begin >= i && m.range.end <= j && category_tag(m.entry.category) == masked[i]) {
        e.matches.push_back(m);
      }
    }
    frame.add(std::move(e));
    i = j;
  }
  return frame;
}

std::vector<Tag> predict_tags(const Sentence& sentence, const Lexicon& lexicon, const TaggerModel& model) {
  return predict(model, normalized_words(sentence), dictionary_tag(sentence, lexicon));
}

std::vector<Tag> BiLstmTagger::tag(const Sentence& sentence) const {
  return predict_tags(sentence, lexicon_, model_);
}

TrainingExample make_training_example(const Sentence& sentence, const std::vector<GoldEntity>& gold,
                                      const Lexicon& lexicon, const PatternTable& patterns) {
  TrainingExample ex;
  ex.words = normalized_words(sentence);
  ex.features = dictionary_tag(sentence, lexicon);
  ex.tags.assign(ex.words.size(), Tag::kO);
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    for (const auto& g : gold) {
      if (!g.span.overlaps(sentence.tokens[i].source_span)) continue;
      switch (g.type) {
        case EntityType::kDefect: ex.tags[i] = Tag::kDefect; break;
        case EntityType::kLocationOfDefect: ex.tags[i] = Tag::kLocation; break;
        case EntityType::kFrequencyOfDefects: ex.tags[i] = Tag::kFrequency; break;
        case EntityType::kSizeOfDefect: break;
      }
      break;
    }
  }
  for (const auto& m : patterns.match(ex.words)) {
    for (std::size_t i = m.range.begin; i < m.range.end; ++i) ex.tags[i] = Tag::kO;
  }
  return ex;
}

}  // namespace piperate
