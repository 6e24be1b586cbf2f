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

// Document model for pipe inspection reports and their gold annotations.

#ifndef PIPERATE_CORPUS_H_
#define PIPERATE_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace piperate {

// Half-open [begin, end) range of byte offsets.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool overlaps(const CharSpan& other) const {
    return begin < other.end && other.begin < end;
  }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

// Half-open [begin, end) range of token indices within one sentence.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool overlaps(const TokenRange& other) const {
    return begin < other.end && other.begin < end;
  }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct Token {
  std::string surface;
  // Lowercased and spell-corrected form used for all matching.
  std::string normalized;
  // Offsets into Sentence::text.
  CharSpan char_span;
  // Offsets into the raw document bytes.
  CharSpan source_span;
};

struct Sentence {
  std::string text;
  std::vector<Token> tokens;
  std::vector<TokenRange> negation_scopes;
  std::string section;
  // Offsets of the sentence inside the raw document.
  CharSpan source_span;
};

inline constexpr std::string_view kUnsectioned = "Unsectioned";

// Recognized section headers, in canonical spelling.
inline constexpr std::array<std::string_view, 8> kSectionNames = {
    "Pipe Characteristics",   "Emergency Repair",
    "Smoke Testing Assessment", "Defects",
    "Composite Assessment",   "Criticality Assessment",
    "Capacity",               "Summary",
};

struct Section {
  std::string name;
  // Header text as written, including the colon; empty for Unsectioned.
  std::string header;
  // Offset of the body inside the raw document.
  std::size_t offset = 0;
  std::string body;
};

struct Document {
  std::string id;
  std::string raw;
  std::vector<Section> sections;
  // Filled by Preprocessor::process.
  std::vector<Sentence> sentences;

  // First section with this name, if any.
  const Section* section(std::string_view name) const;
};

// Splits raw text into sections. Header lines are "<Section Name>:" at the
// start of a line, matched case-insensitively against kSectionNames; text
// before the first header (or in a file without headers) goes to
// "Unsectioned". Throws EmptyDocument on empty input.
Document parse_document(std::string raw, std::string id);

// Concatenation of every section header and body in order; equals the raw
// text for any parsed document.
std::string reassemble(const Document& doc);

enum class EntityType { kDefect, kSizeOfDefect, kLocationOfDefect, kFrequencyOfDefects };

inline constexpr std::array<EntityType, 4> kEntityTypes = {
    EntityType::kDefect, EntityType::kSizeOfDefect,
    EntityType::kLocationOfDefect, EntityType::kFrequencyOfDefects};

std::string_view entity_type_name(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view name);

struct GoldEntity {
  EntityType type = EntityType::kDefect;
  CharSpan span;
  friend bool operator==(const GoldEntity&, const GoldEntity&) = default;
};

struct GoldRecord {
  std::string document_id;
  int rating = 1;
  std::vector<GoldEntity> entities;
  std::string annotator_id;
  friend bool operator==(const GoldRecord&, const GoldRecord&) = default;
};

// Parses the tab-separated gold format, one record per line:
//   doc_id TAB rating TAB type:start-end[,type:start-end...] TAB annotator
// An entity field of "-" or "" means no entities. Blank lines and lines
// starting with '#' are skipped.
std::vector<GoldRecord> parse_gold(std::string_view text);
std::string format_gold(const std::vector<GoldRecord>& records);

// Throws InvalidSpan if any entity span falls outside the document.
void validate_gold(const GoldRecord& record, const Document& doc);

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

// Seeded shuffle of the sorted ids; the first round(ratio * n) go to train.
// Both sides are kept non-empty.
CorpusSplit split_corpus(std::vector<std::string> ids, double ratio, std::uint64_t seed);

std::string format_split(const CorpusSplit& split);
CorpusSplit parse_split(std::string_view text);

// Hook for dropping incomplete documents before splitting. No filter is
// applied by default.
using DocumentFilter = std::function<bool(const Document&)>;
std::vector<Document> filter_documents(std::vector<Document> docs, const DocumentFilter& keep);

// File helpers shared by the loaders.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Loads every regular *.txt file in a directory, sorted by file name; the
// document id is the file stem.
std::vector<Document> load_documents(const std::filesystem::path& dir);

}  // namespace piperate

#endif  // PIPERATE_CORPUS_H_
