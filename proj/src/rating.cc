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

#include "piperate/rating.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "json.hpp"
#include "piperate/error.h"
#include "piperate/pipeline.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kNegationNote = "negated entities are excluded from all weights";
constexpr std::string_view kMixedLocationNote =
    "distance and keyword locations are counted as distinct locations";
constexpr std::string_view kGapNote =
    "no rating row for a defect with frequency very rarely or none; assigned rating 1";

template <std::size_t N>
std::optional<std::size_t> index_of(const std::array<double, N>& values, double v) {
  for (std::size_t i = 0; i < N; ++i) {
    if (values[i] == v) return i;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

WeightTables WeightTables::defaults() {
  WeightTables t;
  t.frequency_bands = {
      {"very rarely", 0}, {"none", 0},
      {"rarely", 1},
      {"moderate", 2},
      {"moderate to frequently", 3},
      {"frequently", 4},  {"very frequently", 4}, {"more frequently", 4},
      {"several", 4},     {"often", 4},           {"oftenly", 4},
  };
  return t;
}

std::optional<int> WeightTables::band(std::string_view term) const {
  auto it = frequency_bands.find(std::string(term));
  if (it == frequency_bands.end()) return std::nullopt;
  return it->second;
}

std::string_view action_text(int rating) {
  switch (rating) {
    case 1: return "Reassess in ten years";
    case 2: return "Rehabilitate or replace in six to ten years";
    case 3: return "Rehabilitate or replace in three to five years";
    case 4: return "Rehabilitate or replace in zero to two years";
    case 5: return "Rehabilitate or replace immediately";
  }
  throw Error(ErrorCode::kInvalidRating, "rating " + std::to_string(rating) + " outside 1..5");
}

double weight_location(const std::vector<EntityFrame>& frames, const WeightTables& tables) {
  std::size_t count = 0;
  for (const auto& f : frames) {
    for (const auto& e : f.locations) count += e.negated ? 0 : 1;
  }
  return count == 1 ? tables.location_one : tables.location_other;
}

double weight_frequency(const std::vector<EntityFrame>& frames, const WeightTables& tables,
                        std::vector<std::string>* notes) {
  int best = 0;
  for (const auto& f : frames) {
    for (const auto& e : f.frequencies) {
      if (e.negated) continue;
      if (e.matches.empty()) {
        if (auto b = tables.band(e.text)) {
          best = std::max(best, *b);
        } else if (notes) {
          notes->push_back("frequency span '" + e.text + "' has no band; ignored");
        }
        continue;
      }
      for (const auto& m : e.matches) {
        auto b = tables.band(m.entry.term);
        if (!b) b = tables.band(m.entry.seed_root);
        if (!b) throw Error(ErrorCode::kUnknownFrequencyTerm, m.entry.term);
        best = std::max(best, *b);
      }
    }
  }
  return tables.frequency[static_cast<std::size_t>(best)];
}

double weight_defect(const std::vector<EntityFrame>& frames, const WeightTables& tables) {
  std::set<std::string> units;
  for (const auto& f : frames) {
    for (const auto& e : f.defects) {
      if (e.negated) continue;
      if (e.matches.empty()) units.insert(e.text);
      for (const auto& m : e.matches) units.insert(m.entry.seed_root);
    }
  }
  return tables.defect[std::min<std::size_t>(units.size(), 2)];
}

DefectRating assign_rating(const WeightTriple& w, const WeightTables& tables) {
  const auto f = index_of(tables.frequency, w.w_frequencies);
  const auto d = index_of(tables.defect, w.w_defect);
  if (!f) throw Error(ErrorCode::kInvalidWeight, "w_frequencies = " + format_double(w.w_frequencies));
  if (!d) throw Error(ErrorCode::kInvalidWeight, "w_defect = " + format_double(w.w_defect));
  if (w.w_location != tables.location_one && w.w_location != tables.location_other) {
    throw Error(ErrorCode::kInvalidWeight, "w_location = " + format_double(w.w_location));
  }
  if (*d == 0) return {1, false};
  if (*f == 0) return {1, true};
  return {static_cast<int>(*f) + 1, false};
}

RatingOutcome rate_frames(const std::vector<EntityFrame>& frames, const WeightTables& tables) {
  RatingOutcome out;
  out.notes.emplace_back(kNegationNote);
  out.weights.w_location = weight_location(frames, tables);
  out.weights.w_frequencies = weight_frequency(frames, tables, &out.notes);
  out.weights.w_defect = weight_defect(frames, tables);
  out.rating = assign_rating(out.weights, tables);

  bool distance = false, keyword = false;
  for (const auto& f : frames) {
    for (const auto& e : f.locations) {
      if (e.negated) continue;
      (e.provenance == "pattern" ? distance : keyword) = true;
    }
  }
  if (distance && keyword) out.notes.emplace_back(kMixedLocationNote);
  if (out.rating.gap_row) out.notes.emplace_back(kGapNote);
  return out;
}

RatingReport make_report(std::string document_id, std::string_view tagger, const std::vector<EntityFrame>& frames,
                         const WeightTables& tables) {
  RatingOutcome outcome = rate_frames(frames, tables);
  RatingReport r;
  r.document_id = std::move(document_id);
  r.tagger = std::string(tagger);
  r.weights = outcome.weights;
  r.rating = outcome.rating;
  r.sentences = frames.size();
  r.notes = std::move(outcome.notes);
  for (const auto& f : frames) {
    for (const Entity* e : f.all()) {
      ReportEntity re;
      re.sentence = f.sentence_index;
      re.type = e->type;
      re.text = e->text;
      re.span = e->source_span;
      re.negated = e->negated;
      re.provenance = e->provenance;
      for (const auto& m : e->matches) re.terms.push_back(m.entry.term + "/" + m.entry.seed_root);
      r.entities.push_back(std::move(re));
    }
  }
  return r;
}

RatingReport rate_document(const Document& doc, const Analyzer& analyzer, const EntityTagger& tagger) {
  Document processed = doc;
  analyzer.process(processed);
  return make_report(doc.id, tagger.name(), analyzer.frames(processed, tagger), analyzer.resources().weights);
}

std::string report_to_json(const RatingReport& r) {
  Json j;
  j["id"] = r.document_id;
  if (r.error) {
    j["error"] = *r.error;
    return j.dump();
  }
  j["tagger"] = r.tagger;
  j["rating"] = r.rating.value;
  j["action"] = std::string(r.rating.action());
  j["gap_row"] = r.rating.gap_row;
  j["weights"] = {{"w_frequencies", r.weights.w_frequencies},
                  {"w_location", r.weights.w_location},
                  {"w_defect", r.weights.w_defect}};
  j["sentences"] = r.sentences;
  Json entities = Json::array();
  for (const auto& e : r.entities) {
    entities.push_back({{"sentence", e.sentence},
                        {"type", std::string(entity_type_name(e.type))},
                        {"text", e.text},
                        {"start", e.span.begin},
                        {"end", e.span.end},
                        {"negated", e.negated},
                        {"provenance", e.provenance},
                        {"terms", e.terms}});
  }
  j["entities"] = std::move(entities);
  j["notes"] = r.notes;
  return j.dump();
}

RatingReport report_from_json(std::string_view line) {
  RatingReport r;
  try {
    const Json j = Json::parse(line);
    r.document_id = j.at("id").get<std::string>();
    if (j.contains("error")) {
      r.error = j.at("error").get<std::string>();
      return r;
    }
    r.tagger = j.at("tagger").get<std::string>();
    r.rating.value = j.at("rating").get<int>();
    r.rating.gap_row = j.at("gap_row").get<bool>();
    const auto& w = j.at("weights");
    r.weights = {w.at("w_frequencies").get<double>(), w.at("w_location").get<double>(),
                 w.at("w_defect").get<double>()};
    r.sentences = j.at("sentences").get<std::size_t>();
    for (const auto& e : j.at("entities")) {
      ReportEntity re;
      re.sentence = e.at("sentence").get<std::size_t>();
      const auto type = parse_entity_type(e.at("type").get<std::string>());
      if (!type) throw Error(ErrorCode::kGoldFormatError, "unknown entity type in report");
      re.type = *type;
      re.text = e.at("text").get<std::string>();
      re.span = {e.at("start").get<std::size_t>(), e.at("end").get<std::size_t>()};
      re.negated = e.at("negated").get<bool>();
      re.provenance = e.at("provenance").get<std::string>();
      re.terms = e.at("terms").get<std::vector<std::string>>();
      r.entities.push_back(std::move(re));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kGoldFormatError, std::string("malformed report: ") + e.what());
  }
  if (r.rating.value < 1 || r.rating.value > 5) throw Error(ErrorCode::kInvalidRating, r.document_id);
  return r;
}

std::vector<RatingReport> parse_reports(std::string_view jsonl) {
  std::vector<RatingReport> out;
  for (auto line : split_lines(jsonl)) {
    if (!trim(line).empty()) out.push_back(report_from_json(line));
  }
  return out;
}

std::string reports_to_csv(const std::vector<RatingReport>& reports) {
  std::ostringstream out;
  out << "doc_id,rating,w_frequencies,w_location,w_defect,gap_row,tagger\n";
  for (const auto& r : reports) {
    if (r.error) {
      out << r.document_id << ",error,,,,,\n";
      continue;
    }
    out << r.document_id << ',' << r.rating.value << ',' << format_double(r.weights.w_frequencies) << ','
        << format_double(r.weights.w_location) << ',' << format_double(r.weights.w_defect) << ','
        << (r.rating.gap_row ? "yes" : "no") << ',' << r.tagger << '\n';
  }
  return out.str();
}

}  // namespace piperate
