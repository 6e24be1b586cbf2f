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

// Defect / location / frequency lexicon grown from seed terms by
// morphological variants and breadth-first search over a synonym graph.

#ifndef PIPERATE_LEXICON_H_
#define PIPERATE_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "piperate/corpus.h"

namespace piperate {

enum class Category { kDefect, kLocation, kFrequency };

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

enum class Origin { kSeed, kMorphological, kSynonym };

struct LexiconEntry {
  std::string term;
  Category category = Category::kDefect;
  Origin origin = Origin::kSeed;
  // Synonym hops from seed_root. Morphological variants carry the depth of
  // the term they were derived from.
  int depth = 0;
  std::string seed_root;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// "seed", "morph", "morph:2", "syn:1".
std::string format_origin(Origin origin, int depth);

// Lowercases and reduces a term to single-space-separated word characters,
// so "Mid-point" and "mid point" are the same term.
std::string normalize_term(std::string_view term);

struct Seed {
  std::string term;
  Category category;
};

// "term TAB category" per line; '#' comments.
std::vector<Seed> load_seeds(const std::filesystem::path& path);
std::vector<Seed> parse_seeds(std::string_view text);

enum class Relation { kSynonym, kAntonym };

class SynonymGraph {
 public:
  struct Edge {
    std::string a;
    std::string b;
    Relation relation;
  };

  // Terms are normalized; self edges are rejected.
  void add_edge(std::string_view a, std::string_view b, Relation relation);
  void add_node(std::string_view term);

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool contains(const std::string& term) const { return nodes_.count(term) > 0; }
  const std::vector<std::pair<std::string, Relation>>& neighbors(const std::string& term) const;

  // "term TAB syn|ant TAB term" per line.
  static SynonymGraph parse(std::string_view text);
  static SynonymGraph load(const std::filesystem::path& path);

 private:
  std::set<std::string> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, std::vector<std::pair<std::string, Relation>>> adjacency_;
};

struct Blacklist {
  std::map<std::string, std::set<std::string>> per_seed;

  bool banned(const std::string& seed, const std::string& term) const;
  void add(std::string_view seed, std::string_view term);

  // "seed TAB banned_term" per line.
  static Blacklist parse(std::string_view text);
  static Blacklist load(const std::filesystem::path& path);
};

struct MorphologyRules {
  // Words that also take a nominal "-age" form (leak -> leakage).
  std::map<std::string, std::string> age_forms;

  static MorphologyRules defaults();
};

// The seed plus its -s, -ing and -ed forms (e-drop and short-vowel
// consonant doubling applied) and a listed -age form.
std::vector<std::string> expand_morphology(std::string_view seed,
                                           const MorphologyRules& rules = MorphologyRules::defaults());

struct LexiconMatch {
  TokenRange range;
  LexiconEntry entry;
};

class Lexicon {
 public:
  // Inserts the entry, or replaces an existing entry for the same term if
  // the new one ranks first: smaller depth, then Seed < Synonym <
  // Morphological, then smaller seed_root. Returns true if stored.
  bool add(LexiconEntry entry);

  const LexiconEntry* find(std::string_view term) const;
  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::set<std::string> terms() const;
  // Every word that appears in some term.
  std::set<std::string> words() const;
  std::size_t count(Category c) const;

  // Longest match, left to right, over single- and multi-word terms.
  std::vector<LexiconMatch> lookup(const std::vector<std::string>& tokens) const;

  std::string format() const;
  static Lexicon parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Lexicon load(const std::filesystem::path& path);

  friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.entries_ == b.entries_; }

 private:
  std::map<std::string, LexiconEntry> entries_;
  std::size_t max_words_ = 0;
};

std::vector<LexiconMatch> lookup(const std::vector<std::string>& tokens, const Lexicon& lexicon);

struct ExpansionLog {
  std::vector<std::string> warnings;
  // (seed, antonym) pairs met during traversal; never added to the lexicon.
  std::vector<std::pair<std::string, std::string>> antonyms;
};

// Breadth-first search from each seed over synonym edges up to max_depth.
// Antonym edges are not followed. Blacklisted terms for a seed are neither
// added nor traversed. Defect terms also receive their morphological
// variants.
Lexicon expand_synonyms(const std::vector<Seed>& seeds, const SynonymGraph& graph,
                        const Blacklist& blacklist, int max_depth, ExpansionLog* log = nullptr,
                        const MorphologyRules& rules = MorphologyRules::defaults());

}  // namespace piperate

#endif  // PIPERATE_LEXICON_H_
