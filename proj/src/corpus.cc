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

#include "piperate/corpus.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "piperate/error.h"
#include "piperate/random.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

struct HeaderHit {
  std::size_t line_start;
  std::size_t body_start;
  std::string_view name;
};

// Returns the header on the line starting at `pos`, if there is one.
std::optional<HeaderHit> match_header(std::string_view raw, std::size_t pos) {
  std::size_t q = pos;
  while (q < raw.size() && (raw[q] == ' ' || raw[q] == '\t')) ++q;
  for (std::string_view name : kSectionNames) {
    if (!iequals_prefix(raw, q, name)) continue;
    std::size_t r = q + name.size();
    while (r < raw.size() && (raw[r] == ' ' || raw[r] == '\t')) ++r;
    if (r < raw.size() && raw[r] == ':') return HeaderHit{pos, r + 1, name};
  }
  return std::nullopt;
}

std::size_t parse_offset(std::string_view s, std::string_view line) {
  std::size_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidSpan, "bad offset '" + std::string(s) + "' in: " + std::string(line));
  }
  return value;
}

}  // namespace

const Section* Document::section(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

Document parse_document(std::string raw, std::string id) {
  if (raw.empty()) throw Error(ErrorCode::kEmptyDocument, "document '" + id + "' is empty");

  std::vector<HeaderHit> headers;
  std::size_t line = 0;
  while (line < raw.size()) {
    if (auto hit = match_header(raw, line)) headers.push_back(*hit);
    const std::size_t nl = raw.find('\n', line);
    if (nl == std::string::npos) break;
    line = nl + 1;
  }

  Document doc;
  doc.id = std::move(id);
  const std::size_t first = headers.empty() ? raw.size() : headers.front().line_start;
  if (first > 0) {
    doc.sections.push_back({std::string(kUnsectioned), "", 0, raw.substr(0, first)});
  }
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const auto& h = headers[i];
    const std::size_t end = i + 1 < headers.size() ? headers[i + 1].line_start : raw.size();
    doc.sections.push_back({std::string(h.name),
                            raw.substr(h.line_start, h.body_start - h.line_start),
                            h.body_start, raw.substr(h.body_start, end - h.body_start)});
  }
  doc.raw = std::move(raw);
  return doc;
}

std::string reassemble(const Document& doc) {
  std::string out;
  for (const auto& s : doc.sections) {
    out += s.header;
    out += s.body;
  }
  return out;
}

std::string_view entity_type_name(EntityType type) {
  switch (type) {
    case EntityType::kDefect: return "Defect";
    case EntityType::kSizeOfDefect: return "SizeOfDefect";
    case EntityType::kLocationOfDefect: return "LocationOfDefect";
    case EntityType::kFrequencyOfDefects: return "FrequencyOfDefects";
  }
  return "Defect";
}

std::optional<EntityType> parse_entity_type(std::string_view name) {
  for (EntityType t : kEntityTypes) {
    if (entity_type_name(t) == name) return t;
  }
  return std::nullopt;
}

std::vector<GoldRecord> parse_gold(std::string_view text) {
  std::vector<GoldRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::string_view line : split_lines(text)) {
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw Error(ErrorCode::kGoldFormatError,
                  "expected 4 tab-separated fields, got " + std::to_string(fields.size()) +
                      ": " + std::string(line));
    }
    GoldRecord rec;
    rec.document_id = std::string(fields[0]);
    rec.annotator_id = std::string(fields[3]);
    if (rec.document_id.empty()) throw Error(ErrorCode::kGoldFormatError, "empty document id");

    int rating = 0;
    const auto rs = fields[1];
    auto [ptr, ec] = std::from_chars(rs.data(), rs.data() + rs.size(), rating);
    if (rs.empty() || ec != std::errc() || ptr != rs.data() + rs.size() || rating < 1 || rating > 5) {
      throw Error(ErrorCode::kInvalidRating, "rating '" + std::string(rs) + "' for " + rec.document_id);
    }
    rec.rating = rating;

    if (fields[2] != "-" && !fields[2].empty()) {
      for (std::string_view item : split(fields[2], ',')) {
        const std::size_t colon = item.rfind(':');
        const std::size_t dash = item.rfind('-');
        if (colon == std::string_view::npos || dash == std::string_view::npos || dash < colon) {
          throw Error(ErrorCode::kInvalidSpan, "malformed entity '" + std::string(item) + "'");
        }
        auto type = parse_entity_type(item.substr(0, colon));
        if (!type) {
          throw Error(ErrorCode::kInvalidSpan, "unknown entity type in '" + std::string(item) + "'");
        }
        GoldEntity e;
        e.type = *type;
        e.span.begin = parse_offset(item.substr(colon + 1, dash - colon - 1), line);
        e.span.end = parse_offset(item.substr(dash + 1), line);
        if (e.span.end <= e.span.begin) {
          throw Error(ErrorCode::kInvalidSpan, "empty or inverted span in '" + std::string(item) + "'");
        }
        rec.entities.push_back(e);
      }
    }
    if (!seen.emplace(rec.document_id, rec.annotator_id).second) {
      throw Error(ErrorCode::kDuplicateRecord,
                  "duplicate record for (" + rec.document_id + ", " + rec.annotator_id + ")");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string format_gold(const std::vector<GoldRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    out << r.document_id << '\t' << r.rating << '\t';
    if (r.entities.empty()) out << '-';
    for (std::size_t i = 0; i < r.entities.size(); ++i) {
      const auto& e = r.entities[i];
      if (i) out << ',';
      out << entity_type_name(e.type) << ':' << e.span.begin << '-' << e.span.end;
    }
    out << '\t' << r.annotator_id << '\n';
  }
  return out.str();
}

void validate_gold(const GoldRecord& record, const Document& doc) {
  for (const auto& e : record.entities) {
    if (e.span.end <= e.span.begin || e.span.end > doc.raw.size()) {
      throw Error(ErrorCode::kInvalidSpan,
                  "span " + std::to_string(e.span.begin) + "-" + std::to_string(e.span.end) +
                      " outside document " + doc.id);
    }
  }
}

CorpusSplit split_corpus(std::vector<std::string> ids, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "split ratio must be in (0, 1)");
  }
  if (ids.size() < 2) {
    throw Error(ErrorCode::kCorpusTooSmall, "need at least 2 documents to split");
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < 2) {
    throw Error(ErrorCode::kCorpusTooSmall, "need at least 2 distinct documents to split");
  }
  Rng rng(seed);
  rng.shuffle(ids);

  const std::size_t n = ids.size();
  auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  CorpusSplit split;
  split.seed = seed;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::string format_split(const CorpusSplit& split) {
  std::ostringstream out;
  out << "# seed " << split.seed << '\n';
  for (const auto& id : split.train) out << "train\t" << id << '\n';
  for (const auto& id : split.test) out << "test\t" << id << '\n';
  return out.str();
}

CorpusSplit parse_split(std::string_view text) {
  CorpusSplit result;
  for (std::string_view line : split_lines(text)) {
    if (line.rfind("# seed ", 0) == 0) {
      result.seed = std::stoull(std::string(line.substr(7)));
      continue;
    }
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || (fields[0] != "train" && fields[0] != "test")) {
      throw Error(ErrorCode::kConfigError, "malformed split line: " + std::string(line));
    }
    (fields[0] == "train" ? result.train : result.test).emplace_back(fields[1]);
  }
  return result;
}

std::vector<Document> filter_documents(std::vector<Document> docs, const DocumentFilter& keep) {
  if (!keep) return docs;
  std::erase_if(docs, [&](const Document& d) { return !keep(d); });
  return docs;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

std::vector<Document> load_documents(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& f : files) docs.push_back(parse_document(read_file(f), f.stem().string()));
  return docs;
}

}  // namespace piperate
