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

// Location, frequency and defect weights and the 1-5 defect rating.

#ifndef PIPERATE_RATING_H_
#define PIPERATE_RATING_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "piperate/corpus.h"
#include "piperate/tagger.h"

namespace piperate {

class Analyzer;

// Weight value sets and the frequency term -> band table. Ratings are
// assigned by each weight's position in its value set, so the constants can
// be overridden without touching the rating rule.
struct WeightTables {
  // Bands 0..4: very rarely or none, rarely, moderate, moderate to
  // frequently, frequently.
  std::array<double, 5> frequency = {0.1, 0.25, 0.50, 0.75, 0.99};
  double location_one = 0.9;
  double location_other = 1.0;
  // No, one, multiple defect units.
  std::array<double, 3> defect = {0.5, 0.8, 1.0};
  std::map<std::string, int> frequency_bands;

  static WeightTables defaults();

  // Band of a normalized frequency term, if listed.
  std::optional<int> band(std::string_view term) const;
};

struct WeightTriple {
  double w_frequencies = 0.1;
  double w_location = 1.0;
  double w_defect = 0.5;
  friend bool operator==(const WeightTriple&, const WeightTriple&) = default;
};

std::string_view action_text(int rating);

struct DefectRating {
  int value = 1;
  // Set for frequency "very rarely or none" with a defect present, a
  // combination the rating table leaves out; such documents get rating 1.
  bool gap_row = false;

  std::string_view action() const { return action_text(value); }
  friend bool operator==(const DefectRating&, const DefectRating&) = default;
};

// Negated entities never count toward any weight.
double weight_location(const std::vector<EntityFrame>& frames, const WeightTables& tables = WeightTables::defaults());

// Maximum band over the non-negated frequency entities. Each lexicon match
// is looked up by term, then by seed root; a lexicon frequency term in
// neither table throws UnknownFrequencyTerm. Entities without any lexicon
// match are looked up by text and skipped with a note if unlisted.
double weight_frequency(const std::vector<EntityFrame>& frames, const WeightTables& tables = WeightTables::defaults(),
                        std::vector<std::string>* notes = nullptr);

// Distinct units are counted by seed root; a defect entity without a
// lexicon match counts as the unit named by its text.
double weight_defect(const std::vector<EntityFrame>& frames, const WeightTables& tables = WeightTables::defaults());

// Throws InvalidWeight for a value outside its set.
DefectRating assign_rating(const WeightTriple& w, const WeightTables& tables = WeightTables::defaults());

struct RatingOutcome {
  WeightTriple weights;
  DefectRating rating;
  std::vector<std::string> notes;
};

RatingOutcome rate_frames(const std::vector<EntityFrame>& frames,
                          const WeightTables& tables = WeightTables::defaults());

struct ReportEntity {
  std::size_t sentence = 0;
  EntityType type = EntityType::kDefect;
  std::string text;
  CharSpan span;
  bool negated = false;
  std::string provenance;
  // "term/seed_root" for each lexicon match.
  std::vector<std::string> terms;
  friend bool operator==(const ReportEntity&, const ReportEntity&) = default;
};

struct RatingReport {
  std::string document_id;
  std::string tagger;
  WeightTriple weights;
  DefectRating rating;
  std::size_t sentences = 0;
  std::vector<ReportEntity> entities;
  std::vector<std::string> notes;
  // Set when the document could not be rated; the other fields are unset.
  std::optional<std::string> error;
  friend bool operator==(const RatingReport&, const RatingReport&) = default;
};

RatingReport make_report(std::string document_id, std::string_view tagger, const std::vector<EntityFrame>& frames,
                         const WeightTables& tables = WeightTables::defaults());

// Parses and preprocesses the document, tags every sentence and rates it.
RatingReport rate_document(const Document& doc, const Analyzer& analyzer, const EntityTagger& tagger);

// One JSON object per line.
std::string report_to_json(const RatingReport& report);
RatingReport report_from_json(std::string_view line);
std::vector<RatingReport> parse_reports(std::string_view jsonl);

// Header plus one row per report.
std::string reports_to_csv(const std::vector<RatingReport>& reports);

}  // namespace piperate

#endif  // PIPERATE_RATING_H_
