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

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

#include "piperate/error.h"
#include "piperate/random.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

// Sentences that carry no entities.
const std::vector<std::string> kFillers = {
    "The crew inspected the line from the street.",
    "Flow was normal during the survey.",
    "The camera was moved through the main.",
    "Inspection was completed in the morning.",
    "Traffic control was in place.",
    "Weather was clear and dry.",
    "The report was reviewed by the supervisor.",
    "Access to the manhole was good.",
    "The line serves a residential area.",
    "Video was recorded for the whole run.",
};

// Words the sentence templates put around the terms.
const std::vector<std::string> kTemplateWords = {
    "there", "is",    "in",    "the",      "pipe",   "observed",     "crew",  "found", "and",
    "also",  "near",  "at",    "away",     "from",   "installation", "manhole", "between", "line",
    "was",   "checked", "measuring", "evidence", "of", "here", "segment", "runs", "two", "manholes",
};

const std::vector<std::string> kDistanceUnits = {"feet", "ft", "meters"};
const std::vector<std::string> kSizeUnits = {"inches", "inch", "mm", "cm"};

struct Mention {
  EntityType type;
  LexiconEntry entry;
};

struct Segment {
  std::string text;
  // No space before this segment.
  bool attach = false;
  std::optional<Mention> mention;
};

using Plan = std::vector<Segment>;

struct SectionPlan {
  std::string name;
  std::vector<std::pair<Plan, bool>> sentences;  // (plan, negated)
};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

void words(Plan& p, std::string_view text) {
  for (auto w : split(text, ' ')) p.push_back({std::string(w), false, std::nullopt});
}

class Generator {
 public:
  Generator(const GeneratorConfig& config, const Analyzer& analyzer) : config_(config), analyzer_(analyzer) {
    const Lexicon& lex = analyzer.resources().lexicon;
    if (lex.empty()) throw Error(ErrorCode::kLexiconRequired, "synthetic corpus needs a lexicon");
    for (const auto& [term, e] : lex.entries()) {
      switch (e.category) {
        case Category::kDefect: defects_.push_back(e); break;
        case Category::kLocation: locations_.push_back(e); break;
        case Category::kFrequency: {
          auto b = analyzer.resources().weights.band(term);
          if (!b) b = analyzer.resources().weights.band(e.seed_root);
          if (b) bands_[*b].push_back(e);
          break;
        }
      }
    }
    if (defects_.empty() || locations_.empty()) {
      throw Error(ErrorCode::kLexiconRequired, "lexicon needs defect and location terms");
    }
    for (int b = 0; b < 5; ++b) {
      if (bands_[b].empty()) {
        throw Error(ErrorCode::kLexiconRequired, "no frequency term for band " + std::to_string(b));
      }
    }
    check_templates();
  }

  std::pair<Document, GoldRecord> document(const std::string& id, Rng& rng) const;

 private:
  void check_templates() const {
    const Lexicon& lex = analyzer_.resources().lexicon;
    const SpellVocabulary& vocab = analyzer_.preprocessor().vocabulary();
    std::vector<std::string> all = kTemplateWords;
    all.insert(all.end(), kDistanceUnits.begin(), kDistanceUnits.end());
    all.insert(all.end(), kSizeUnits.begin(), kSizeUnits.end());
    for (const auto& f : kFillers) {
      const Sentence s = analyzer_.preprocessor().make_sentence(normalize_text(f));
      if (!lex.lookup(normalized_words(s)).empty()) {
        throw Error(ErrorCode::kInvalidArgument, "filler sentence contains lexicon terms: " + f);
      }
      for (const auto& t : s.tokens) all.push_back(t.normalized);
    }
    for (const auto& w : all) {
      if (lex.find(w) != nullptr) throw Error(ErrorCode::kInvalidArgument, "template word is a lexicon term: " + w);
      const bool letters = std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
      if (letters && w.size() >= vocab.min_word_length && !vocab.contains(w)) {
        throw Error(ErrorCode::kInvalidArgument, "template word missing from the base words: " + w);
      }
    }
  }

  // A typo the spelling corrector maps back to `word`, or `word` itself.
  std::string maybe_typo(const std::string& word, Rng& rng) const {
    if (word.size() < 5 || !rng.bernoulli(config_.typo_probability)) return word;
    const SpellVocabulary& vocab = analyzer_.preprocessor().vocabulary();
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::string t = word;
      const std::size_t i = 1 + rng.below(t.size() - 2);
      switch (rng.below(3)) {
        case 0: std::swap(t[i], t[i + 1]); break;
        case 1: t.erase(i, 1); break;
        default: t.insert(i, 1, t[i]); break;
      }
      Token tok;
      tok.surface = t;
      tok.normalized = t;
      if (t != word && correct_spelling(tok, vocab).normalized == word) return t;
    }
    return word;
  }

  Segment term(const LexiconEntry& e, EntityType type, Rng& rng) const {
    std::string surface = e.term;
    if (surface.find(' ') == std::string::npos) surface = maybe_typo(surface, rng);
    return {surface, false, Mention{type, e}};
  }

  LexiconEntry pick_defect(Rng& rng, const std::set<std::string>& avoid_roots) const {
    for (int attempt = 0; attempt < 20; ++attempt) {
      const auto& e = rng.pick(defects_);
      if (!avoid_roots.count(e.seed_root)) return e;
    }
    return rng.pick(defects_);
  }

  void location_clause(Plan& p, int kind, Rng& rng) const {
    const auto distance = [&](Plan& q) {
      const std::size_t n = 1 + rng.below(300);
      std::string num = std::to_string(n);
      if (rng.bernoulli(0.2)) num += "." + std::to_string(rng.below(10));
      const std::string unit = rng.pick(kDistanceUnits);
      LexiconEntry none;
      q.push_back({num + " " + unit, false, Mention{EntityType::kLocationOfDefect, none}});
    };
    switch (kind) {
      case 1:
        words(p, rng.bernoulli(0.5) ? "near the" : "at the");
        p.push_back(term(rng.pick(locations_), EntityType::kLocationOfDefect, rng));
        break;
      case 2:
        if (rng.bernoulli(0.5)) {
          words(p, "at");
          distance(p);
          words(p, "away from pipe installation");
        } else {
          distance(p);
          words(p, "away from the manhole");
        }
        break;
      case 3:
        if (rng.bernoulli(0.5)) {
          words(p, "between the");
          const auto a = rng.pick(locations_);
          auto b = rng.pick(locations_);
          for (int i = 0; i < 10 && b.term == a.term; ++i) b = rng.pick(locations_);
          p.push_back(term(a, EntityType::kLocationOfDefect, rng));
          words(p, "and the");
          p.push_back(term(b, EntityType::kLocationOfDefect, rng));
        } else {
          words(p, "near the");
          p.push_back(term(rng.pick(locations_), EntityType::kLocationOfDefect, rng));
          words(p, "and at");
          distance(p);
          words(p, "away");
        }
        break;
      default: break;
    }
  }

  void size_clause(Plan& p, Rng& rng) const {
    words(p, "measuring");
    const std::string num = std::to_string(1 + rng.below(24));
    LexiconEntry none;
    p.push_back({num + " " + rng.pick(kSizeUnits), false, Mention{EntityType::kSizeOfDefect, none}});
  }

  void defect_list(Plan& p, const std::vector<LexiconEntry>& ds, Rng& rng) const {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (i > 0) words(p, "and");
      p.push_back(term(ds[i], EntityType::kDefect, rng));
    }
  }

  const GeneratorConfig& config_;
  const Analyzer& analyzer_;
  std::vector<LexiconEntry> defects_;
  std::vector<LexiconEntry> locations_;
  std::map<int, std::vector<LexiconEntry>> bands_;
};

std::size_t weighted(Rng& rng, const double* w, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::max(0.0, w[i]);
  if (total <= 0.0) return 0;
  double x = rng.uniform() * total;
  for (std::size_t i = 0; i < n; ++i) {
    x -= std::max(0.0, w[i]);
    if (x < 0.0) return i;
  }
  return n - 1;
}

std::pair<Document, GoldRecord> Generator::document(const std::string& id, Rng& rng) const {
  const int target = 1 + static_cast<int>(weighted(rng, config_.rating_weights.data(), 5));
  std::vector<LexiconEntry> positive;
  std::optional<LexiconEntry> frequency;
  if (target >= 2) {
    frequency = rng.pick(bands_.at(target - 1));
  } else {
    switch (rng.below(3)) {
      case 0:
        if (rng.bernoulli(0.5)) frequency = rng.pick(bands_.at(static_cast<int>(rng.below(5))));
        break;
      case 1: frequency = rng.pick(bands_.at(0)); [[fallthrough]];
      default: positive.push_back(pick_defect(rng, {})); break;
    }
  }
  if (target >= 2) {
    const std::size_t n = rng.bernoulli(0.6) ? 1 : 2 + rng.below(2);
    std::set<std::string> roots;
    for (std::size_t i = 0; i < n; ++i) {
      positive.push_back(pick_defect(rng, roots));
      roots.insert(positive.back().seed_root);
    }
  }
  const int location = static_cast<int>(weighted(rng, config_.location_weights.data(), 4));

  // Main sentences.
  std::vector<std::pair<Plan, bool>> main;
  Plan p;
  if (positive.empty()) {
    if (frequency || location != 0) {
      words(p, "the line was checked");
      if (frequency) p.push_back(term(*frequency, EntityType::kFrequencyOfDefects, rng));
      location_clause(p, location, rng);
      main.push_back({p, false});
    }
  } else {
    std::vector<LexiconEntry> first = positive;
    std::vector<LexiconEntry> second;
    if (first.size() > 1 && rng.bernoulli(0.3)) {
      second.push_back(first.back());
      first.pop_back();
    }
    const bool size = rng.bernoulli(config_.size_probability);
    switch (rng.below(3)) {
      case 0:
        if (frequency) {
          p.push_back(term(*frequency, EntityType::kFrequencyOfDefects, rng));
          p.push_back({",", true, std::nullopt});
        }
        words(p, "there is");
        defect_list(p, first, rng);
        if (size) size_clause(p, rng);
        words(p, "in the pipe");
        location_clause(p, location, rng);
        break;
      case 1:
        defect_list(p, first, rng);
        if (size) size_clause(p, rng);
        words(p, "observed");
        if (frequency) p.push_back(term(*frequency, EntityType::kFrequencyOfDefects, rng));
        location_clause(p, location, rng);
        break;
      default:
        words(p, "the crew found");
        defect_list(p, first, rng);
        if (size) size_clause(p, rng);
        if (frequency) p.push_back(term(*frequency, EntityType::kFrequencyOfDefects, rng));
        location_clause(p, location, rng);
        break;
    }
    main.push_back({p, false});
    if (!second.empty()) {
      Plan q;
      words(q, "also found");
      defect_list(q, second, rng);
      main.push_back({q, false});
    }
  }

  std::vector<std::pair<Plan, bool>> summary;
  if (rng.bernoulli(config_.negated_sentence_probability)) {
    Plan q;
    if (rng.bernoulli(0.5)) {
      words(q, "no");
      q.push_back(term(pick_defect(rng, {}), EntityType::kDefect, rng));
      words(q, "observed");
    } else {
      words(q, "there was no evidence of");
      q.push_back(term(pick_defect(rng, {}), EntityType::kDefect, rng));
      words(q, "here");
    }
    summary.push_back({q, true});
  }
  const std::size_t fillers = config_.max_filler_sentences == 0 ? 0 : rng.below(config_.max_filler_sentences + 1);
  for (std::size_t i = 0; i < fillers; ++i) {
    Plan q;
    std::string f = rng.pick(kFillers);
    f.pop_back();
    words(q, f);
    summary.push_back({q, false});
  }

  std::vector<SectionPlan> sections;
  {
    Plan intro;
    words(intro, "segment S" + std::to_string(100 + rng.below(900)) + " runs between two manholes");
    sections.push_back({"Pipe Characteristics", {{intro, false}}});
    sections.push_back({"Defects", main});
    sections.push_back({"Summary", summary});
  }
  const bool headers = rng.bernoulli(0.8);

  // Assemble the text and record mention spans.
  std::string raw;
  std::vector<GoldMention> mentions;
  std::size_t sentence_index = 0;
  for (const auto& section : sections) {
    if (section.sentences.empty()) continue;
    if (headers) {
      raw += section.name + ":\n";
    } else if (!raw.empty()) {
      raw += '\n';
    }
    bool first_sentence = true;
    for (const auto& [plan, negated] : section.sentences) {
      if (!first_sentence) raw += ' ';
      first_sentence = false;
      for (std::size_t i = 0; i < plan.size(); ++i) {
        const Segment& seg = plan[i];
        if (i > 0 && !seg.attach) raw += ' ';
        const std::string text = i == 0 ? capitalize(seg.text) : seg.text;
        if (seg.mention) {
          GoldMention m;
          m.entity = {seg.mention->type, {raw.size(), raw.size() + text.size()}};
          m.sentence = sentence_index;
          m.negated = negated;
          m.entry = seg.mention->entry;
          mentions.push_back(std::move(m));
        }
        raw += text;
      }
      raw += '.';
      ++sentence_index;
    }
    if (headers) raw += '\n';
  }
  if (raw.empty() || raw.back() != '\n') raw += '\n';

  GoldRecord gold;
  gold.document_id = id;
  gold.annotator_id = config_.annotator;
  for (const auto& m : mentions) gold.entities.push_back(m.entity);
  gold.rating = rate_frames(gold_frames(mentions), analyzer_.resources().weights).rating.value;
  return {parse_document(std::move(raw), id), std::move(gold)};
}

}  // namespace

std::vector<EntityFrame> gold_frames(const std::vector<GoldMention>& mentions) {
  std::vector<EntityFrame> frames;
  for (const auto& m : mentions) {
    while (frames.size() <= m.sentence) {
      frames.emplace_back();
      frames.back().sentence_index = frames.size() - 1;
    }
    Entity e;
    e.type = m.entity.type;
    e.negated = m.negated;
    e.source_span = m.entity.span;
    e.provenance = m.entry.term.empty() ? "pattern" : "gold";
    e.text = m.entry.term;
    if (!m.entry.term.empty()) e.matches.push_back({{0, 0}, m.entry});
    frames[m.sentence].add(std::move(e));
  }
  return frames;
}

GeneratedCorpus generate_synthetic_corpus(const GeneratorConfig& config, const Analyzer& analyzer,
                                          std::uint64_t seed) {
  GeneratedCorpus out;
  const Generator gen(config, analyzer);
  Rng rng(Rng::derive(seed, 2));
  for (std::size_t i = 0; i < config.documents; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "%04zu", i + 1);
    auto [doc, gold] = gen.document(config.id_prefix + id, rng);
    out.documents.push_back(std::move(doc));
    out.gold.push_back(std::move(gold));
  }
  return out;
}

}  // namespace piperate
