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

#include "piperate/lexicon.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>
#include <tuple>

#include "piperate/error.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

int vowel_groups(std::string_view w) {
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

// Single-syllable consonant-vowel-consonant words double the final
// consonant before -ing/-ed: sag -> sagging.
bool doubles_final(std::string_view w) {
  if (w.size() < 3) return false;
  const char last = w[w.size() - 1];
  const char mid = w[w.size() - 2];
  const char first = w[w.size() - 3];
  return !is_vowel(last) && last != 'w' && last != 'x' && last != 'y' && is_vowel(mid) &&
         !is_vowel(first) && vowel_groups(w) == 1;
}

bool single_word(std::string_view term) { return term.find(' ') == std::string_view::npos; }

int origin_rank(Origin o) {
  switch (o) {
    case Origin::kSeed: return 0;
    case Origin::kSynonym: return 1;
    case Origin::kMorphological: return 2;
  }
  return 3;
}

[[noreturn]] void format_error(const std::string& what, std::string_view line) {
  throw Error(ErrorCode::kLexiconFormatError, what + ": " + std::string(line));
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kDefect: return "Defect";
    case Category::kLocation: return "Location";
    case Category::kFrequency: return "Frequency";
  }
  return "Defect";
}

std::optional<Category> parse_category(std::string_view name) {
  const std::string n = to_lower(name);
  if (n == "defect") return Category::kDefect;
  if (n == "location") return Category::kLocation;
  if (n == "frequency") return Category::kFrequency;
  return std::nullopt;
}

std::string format_origin(Origin origin, int depth) {
  switch (origin) {
    case Origin::kSeed: return "seed";
    case Origin::kMorphological: return depth == 0 ? "morph" : "morph:" + std::to_string(depth);
    case Origin::kSynonym: return "syn:" + std::to_string(depth);
  }
  return "seed";
}

std::string normalize_term(std::string_view term) {
  std::string out;
  bool pending = false;
  for (char c : term) {
    if (!is_word_char(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

std::vector<Seed> parse_seeds(std::string_view text) {
  std::vector<Seed> seeds;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw Error(ErrorCode::kLexiconFormatError, "seed line: " + std::string(line));
    auto cat = parse_category(trim(f[1]));
    const std::string term = normalize_term(f[0]);
    if (!cat || term.empty()) throw Error(ErrorCode::kLexiconFormatError, "seed line: " + std::string(line));
    seeds.push_back({term, *cat});
  }
  return seeds;
}

std::vector<Seed> load_seeds(const std::filesystem::path& path) { return parse_seeds(read_file(path)); }

void SynonymGraph::add_node(std::string_view term) {
  const std::string t = normalize_term(term);
  if (t.empty()) throw Error(ErrorCode::kGraphFormatError, "empty term");
  nodes_.insert(t);
}

void SynonymGraph::add_edge(std::string_view a, std::string_view b, Relation relation) {
  const std::string ta = normalize_term(a);
  const std::string tb = normalize_term(b);
  if (ta.empty() || tb.empty()) throw Error(ErrorCode::kGraphFormatError, "empty term in edge");
  if (ta == tb) throw Error(ErrorCode::kGraphFormatError, "self edge on '" + ta + "'");
  nodes_.insert(ta);
  nodes_.insert(tb);
  edges_.push_back({ta, tb, relation});
  adjacency_[ta].emplace_back(tb, relation);
  adjacency_[tb].emplace_back(ta, relation);
}

const std::vector<std::pair<std::string, Relation>>& SynonymGraph::neighbors(const std::string& term) const {
  static const std::vector<std::pair<std::string, Relation>> kNone;
  auto it = adjacency_.find(term);
  return it == adjacency_.end() ? kNone : it->second;
}

SynonymGraph SynonymGraph::parse(std::string_view text) {
  SynonymGraph g;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 3) throw Error(ErrorCode::kGraphFormatError, "graph line: " + std::string(line));
    const auto rel = trim(f[1]);
    if (rel == "syn") {
      g.add_edge(f[0], f[2], Relation::kSynonym);
    } else if (rel == "ant") {
      g.add_edge(f[0], f[2], Relation::kAntonym);
    } else {
      throw Error(ErrorCode::kGraphFormatError, "unknown relation in: " + std::string(line));
    }
  }
  return g;
}

SynonymGraph SynonymGraph::load(const std::filesystem::path& path) { return parse(read_file(path)); }

bool Blacklist::banned(const std::string& seed, const std::string& term) const {
  auto it = per_seed.find(seed);
  return it != per_seed.end() && it->second.count(term) > 0;
}

void Blacklist::add(std::string_view seed, std::string_view term) {
  per_seed[normalize_term(seed)].insert(normalize_term(term));
}

Blacklist Blacklist::parse(std::string_view text) {
  Blacklist b;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2 || normalize_term(f[0]).empty() || normalize_term(f[1]).empty()) {
      throw Error(ErrorCode::kConfigError, "blacklist line: " + std::string(line));
    }
    b.add(f[0], f[1]);
  }
  return b;
}

Blacklist Blacklist::load(const std::filesystem::path& path) { return parse(read_file(path)); }

MorphologyRules MorphologyRules::defaults() {
  MorphologyRules r;
  r.age_forms = {{"leak", "leakage"},   {"break", "breakage"}, {"seep", "seepage"},
                 {"block", "blockage"}, {"spill", "spillage"}, {"shrink", "shrinkage"},
                 {"wreck", "wreckage"}};
  return r;
}

std::vector<std::string> expand_morphology(std::string_view seed_in, const MorphologyRules& rules) {
  const std::string seed(seed_in);
  std::vector<std::string> out{seed};
  if (seed.empty() || !single_word(seed)) return out;

  const char last = seed.back();
  const bool consonant_y = seed.size() > 1 && last == 'y' && !is_vowel(seed[seed.size() - 2]);
  const bool ends_e = last == 'e' && !(seed.size() > 1 && seed[seed.size() - 2] == 'e');
  const auto ends_with = [&](std::string_view s) {
    return seed.size() >= s.size() && seed.compare(seed.size() - s.size(), s.size(), s) == 0;
  };

  if (ends_with("s") || ends_with("x") || ends_with("z") || ends_with("ch") || ends_with("sh")) {
    out.push_back(seed + "es");
  } else if (consonant_y) {
    out.push_back(seed.substr(0, seed.size() - 1) + "ies");
  } else {
    out.push_back(seed + "s");
  }

  std::string stem = seed;
  if (ends_e) {
    stem.pop_back();
  } else if (doubles_final(seed)) {
    stem.push_back(last);
  }
  out.push_back(stem + "ing");
  if (ends_e) {
    out.push_back(seed + "d");
  } else if (consonant_y) {
    out.push_back(seed.substr(0, seed.size() - 1) + "ied");
  } else {
    out.push_back(stem + "ed");
  }

  if (auto it = rules.age_forms.find(seed); it != rules.age_forms.end()) out.push_back(it->second);

  std::vector<std::string> dedup;
  for (auto& w : out) {
    if (std::find(dedup.begin(), dedup.end(), w) == dedup.end()) dedup.push_back(std::move(w));
  }
  return dedup;
}

bool Lexicon::add(LexiconEntry entry) {
  if (entry.term.empty()) throw Error(ErrorCode::kLexiconFormatError, "empty term");
  auto it = entries_.find(entry.term);
  if (it != entries_.end()) {
    const auto& cur = it->second;
    const auto key = [](const LexiconEntry& e) {
      return std::make_tuple(e.depth, origin_rank(e.origin), std::string_view(e.seed_root));
    };
    if (!(key(entry) < key(cur))) return false;
    it->second = std::move(entry);
    return true;
  }
  const std::size_t words = static_cast<std::size_t>(std::count(entry.term.begin(), entry.term.end(), ' ')) + 1;
  max_words_ = std::max(max_words_, words);
  std::string term = entry.term;
  entries_.emplace(std::move(term), std::move(entry));
  return true;
}

const LexiconEntry* Lexicon::find(std::string_view term) const {
  auto it = entries_.find(std::string(term));
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<std::string> Lexicon::terms() const {
  std::set<std::string> out;
  for (const auto& [term, _] : entries_) out.insert(term);
  return out;
}

std::set<std::string> Lexicon::words() const {
  std::set<std::string> out;
  for (const auto& [term, _] : entries_) {
    for (auto w : split(term, ' ')) out.emplace(w);
  }
  return out;
}

std::size_t Lexicon::count(Category c) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [c](const auto& kv) { return kv.second.category == c; }));
}

std::vector<LexiconMatch> Lexicon::lookup(const std::vector<std::string>& tokens) const {
  std::vector<LexiconMatch> matches;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool found = false;
    const std::size_t longest = std::min(max_words_, tokens.size() - i);
    for (std::size_t len = longest; len >= 1 && !found; --len) {
      std::string key = tokens[i];
      for (std::size_t k = 1; k < len; ++k) key += ' ' + tokens[i + k];
      if (const LexiconEntry* e = find(key)) {
        matches.push_back({{i, i + len}, *e});
        i += len;
        found = true;
      }
    }
    if (!found) ++i;
  }
  return matches;
}

std::vector<LexiconMatch> lookup(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
  return lexicon.lookup(tokens);
}

std::string Lexicon::format() const {
  std::ostringstream out;
  for (const auto& [term, e] : entries_) {
    out << term << '\t' << category_name(e.category) << '\t' << format_origin(e.origin, e.depth) << '\t'
        << e.seed_root << '\n';
  }
  return out.str();
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 4) format_error("expected 4 fields", line);
    LexiconEntry e;
    e.term = std::string(f[0]);
    if (e.term.empty() || normalize_term(e.term) != e.term) format_error("term not normalized", line);
    auto cat = parse_category(f[1]);
    if (!cat) format_error("unknown category", line);
    e.category = *cat;

    const std::string_view origin = f[2];
    const auto parse_depth = [&](std::string_view digits) {
      int d = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || d < 0) {
        format_error("bad depth", line);
      }
      return d;
    };
    if (origin == "seed") {
      e.origin = Origin::kSeed;
    } else if (origin == "morph") {
      e.origin = Origin::kMorphological;
    } else if (origin.rfind("morph:", 0) == 0) {
      e.origin = Origin::kMorphological;
      e.depth = parse_depth(origin.substr(6));
    } else if (origin.rfind("syn:", 0) == 0) {
      e.origin = Origin::kSynonym;
      e.depth = parse_depth(origin.substr(4));
      if (e.depth < 1) format_error("synonym depth must be >= 1", line);
    } else {
      format_error("unknown origin", line);
    }
    e.seed_root = std::string(f[3]);
    if (e.seed_root.empty()) format_error("empty seed root", line);
    if (lex.find(e.term)) format_error("duplicate term", line);
    lex.add(std::move(e));
  }
  for (const auto& [term, e] : lex.entries_) {
    const LexiconEntry* root = lex.find(e.seed_root);
    if (!root || root->origin != Origin::kSeed) {
      throw Error(ErrorCode::kLexiconFormatError, "seed root '" + e.seed_root + "' of '" + term + "' is not a seed");
    }
  }
  return lex;
}

void Lexicon::save(const std::filesystem::path& path) const { write_file(path, format()); }

Lexicon Lexicon::load(const std::filesystem::path& path) { return parse(read_file(path)); }

Lexicon expand_synonyms(const std::vector<Seed>& seeds, const SynonymGraph& graph, const Blacklist& blacklist,
                        int max_depth, ExpansionLog* log, const MorphologyRules& rules) {
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "no seed terms");
  if (max_depth < 0) throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 0");

  Lexicon lex;
  const auto add_with_variants = [&](const std::string& term, const Seed& seed, Origin origin, int depth) {
    lex.add({term, seed.category, origin, depth, seed.term});
    if (seed.category != Category::kDefect || !single_word(term)) return;
    for (const auto& v : expand_morphology(term, rules)) {
      if (v == term || blacklist.banned(seed.term, v)) continue;
      lex.add({v, seed.category, Origin::kMorphological, depth, seed.term});
    }
  };

  for (const Seed& seed : seeds) {
    if (!graph.contains(seed.term) && log) {
      log->warnings.push_back("seed '" + seed.term + "' not in synonym graph");
    }
    add_with_variants(seed.term, seed, Origin::kSeed, 0);

    std::set<std::string> visited{seed.term};
    std::deque<std::pair<std::string, int>> queue{{seed.term, 0}};
    while (!queue.empty()) {
      auto [term, depth] = queue.front();
      queue.pop_front();
      if (depth >= max_depth) continue;
      for (const auto& [next, relation] : graph.neighbors(term)) {
        if (relation == Relation::kAntonym) {
          if (log) log->antonyms.emplace_back(seed.term, next);
          continue;
        }
        if (visited.count(next) || blacklist.banned(seed.term, next)) continue;
        visited.insert(next);
        add_with_variants(next, seed, Origin::kSynonym, depth + 1);
        queue.emplace_back(next, depth + 1);
      }
    }
  }
  return lex;
}

}  // namespace piperate
