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

// One-vs-rest metrics, Cohen's kappa, and the entity and rating reports.

#ifndef PIPERATE_EVALUATION_H_
#define PIPERATE_EVALUATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "piperate/corpus.h"
#include "piperate/rating.h"

namespace piperate {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Throws AlignmentError if the lengths differ.
ConfusionCounts confusion_counts(std::span<const int> pred, std::span<const int> gold, int target);

// Undefined (0/0) values are empty.
struct MetricRow {
  std::string label;
  ConfusionCounts counts;
  std::optional<double> accuracy;
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> f1;
  // Rows outside the standard report set.
  bool extension = false;
};

MetricRow metrics(const ConfusionCounts& c, std::string label = {});

// (p_o - p_e) / (1 - p_e); empty when p_e = 1. Throws AlignmentError if the
// lengths differ.
std::optional<double> cohens_kappa(std::span<const int> a, std::span<const int> b);

// Token classes for entity evaluation.
enum class TokenLabel : int { kNone = 0, kDefect = 1, kSize = 2, kLocation = 3, kFrequency = 4 };
inline constexpr std::size_t kNumTokenLabels = 5;

TokenLabel token_label(EntityType type);
std::string_view token_label_row_name(TokenLabel label);

// Label of every token of a processed document, in sentence order. A token
// takes the type of the first span overlapping it.
std::vector<int> token_labels(const Document& doc, const std::vector<GoldEntity>& spans);

// Entity spans listed in a rating report.
std::vector<GoldEntity> report_spans(const RatingReport& report);

struct MetricReport {
  std::string title;
  std::vector<MetricRow> rows;
  // Mean over the defined values of the non-extension rows.
  MetricRow macro;
  std::optional<double> overall_accuracy;
  std::size_t items = 0;
  std::vector<std::string> notes;
};

// Token-level one-vs-rest rows for Defect, Location and Frequency, plus
// Size as an extension row. Throws MissingGold if a predicted document has
// no gold labels.
MetricReport evaluate_entities(const std::map<std::string, std::vector<int>>& pred,
                               const std::map<std::string, std::vector<int>>& gold);

// Exact span matching per entity type. True negatives do not exist at span
// level, so accuracy and specificity are left undefined.
MetricReport evaluate_entity_spans(const std::map<std::string, std::vector<GoldEntity>>& pred,
                                   const std::map<std::string, std::vector<GoldEntity>>& gold);

// One row per rating 1..5 and the overall accuracy.
MetricReport evaluate_ratings(const std::map<std::string, int>& pred, const std::map<std::string, int>& gold);

struct AgreementRow {
  std::string label;
  std::optional<double> kappa;
};

// Rating agreement between the first two annotators (by id) over documents
// rated by both: overall kappa, then binarized kappa per rating class.
std::vector<AgreementRow> annotator_agreement(const std::vector<GoldRecord>& records);

// Percentages with one decimal; "n/a" for undefined values. Notes follow
// the rows as '#' lines.
std::string report_to_csv(const MetricReport& report);
// Raw fractions and counts.
std::string report_to_json(const MetricReport& report);
std::string agreement_to_csv(const std::vector<AgreementRow>& rows);

}  // namespace piperate

#endif  // PIPERATE_EVALUATION_H_
