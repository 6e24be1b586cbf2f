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

#include "piperate/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "piperate/error.h"

namespace piperate {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFormulaNote =
    "precision = TP/(TP+FP) and specificity = TN/(TN+FP): standard definitions, corrected from the printed "
    "originals";
constexpr std::string_view kUndefinedNote = "n/a marks an undefined 0/0 value; macro averages skip it";

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void add_to_macro(const std::vector<MetricRow>& rows, MetricRow& macro) {
  const auto mean = [&](std::optional<double> MetricRow::*field) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.extension || !(r.*field)) continue;
      sum += *(r.*field);
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  macro.label = "Macro average";
  macro.accuracy = mean(&MetricRow::accuracy);
  macro.recall = mean(&MetricRow::recall);
  macro.specificity = mean(&MetricRow::specificity);
  macro.precision = mean(&MetricRow::precision);
  macro.f1 = mean(&MetricRow::f1);
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
  return buf;
}

Json fraction(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json row_json(const MetricRow& r) {
  return {{"label", r.label},
          {"accuracy", fraction(r.accuracy)},
          {"recall", fraction(r.recall)},
          {"specificity", fraction(r.specificity)},
          {"precision", fraction(r.precision)},
          {"f1", fraction(r.f1)},
          {"tp", r.counts.tp},
          {"fp", r.counts.fp},
          {"fn", r.counts.fn},
          {"tn", r.counts.tn},
          {"extension", r.extension}};
}

}  // namespace

ConfusionCounts confusion_counts(std::span<const int> pred, std::span<const int> gold, int target) {
  if (pred.size() != gold.size()) throw Error(ErrorCode::kAlignmentError, "prediction and gold lengths differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == target;
    const bool g = gold[i] == target;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

MetricRow metrics(const ConfusionCounts& c, std::string label) {
  MetricRow r;
  r.label = std::move(label);
  r.counts = c;
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.specificity = ratio(c.tn, c.tn + c.fp);
  r.precision = ratio(c.tp, c.tp + c.fp);
  if (r.recall && r.precision && *r.recall + *r.precision > 0.0) {
    r.f1 = 2.0 * (*r.recall * *r.precision) / (*r.recall + *r.precision);
  }
  return r;
}

std::optional<double> cohens_kappa(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kAlignmentError, "annotation lists differ in length");
  if (a.empty()) return std::nullopt;
  std::map<int, std::size_t> ca, cb;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    agree += a[i] == b[i] ? 1 : 0;
  }
  const double n = static_cast<double>(a.size());
  const double po = static_cast<double>(agree) / n;
  double pe = 0.0;
  for (const auto& [label, count] : ca) {
    auto it = cb.find(label);
    if (it != cb.end()) pe += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
  }
  if (pe == 1.0) return std::nullopt;
  return (po - pe) / (1.0 - pe);
}

TokenLabel token_label(EntityType type) {
  switch (type) {
    case EntityType::kDefect: return TokenLabel::kDefect;
    case EntityType::kSizeOfDefect: return TokenLabel::kSize;
    case EntityType::kLocationOfDefect: return TokenLabel::kLocation;
    case EntityType::kFrequencyOfDefects: return TokenLabel::kFrequency;
  }
  return TokenLabel::kNone;
}

std::string_view token_label_row_name(TokenLabel label) {
  switch (label) {
    case TokenLabel::kNone: return "None";
    case TokenLabel::kDefect: return "Defects";
    case TokenLabel::kSize: return "Size of defect";
    case TokenLabel::kLocation: return "Location of defect";
    case TokenLabel::kFrequency: return "Frequency of defects";
  }
  return "None";
}

std::vector<int> token_labels(const Document& doc, const std::vector<GoldEntity>& spans) {
  std::vector<int> out;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      int label = static_cast<int>(TokenLabel::kNone);
      for (const auto& g : spans) {
        if (g.span.overlaps(t.source_span)) {
          label = static_cast<int>(token_label(g.type));
          break;
        }
      }
      out.push_back(label);
    }
  }
  return out;
}

std::vector<GoldEntity> report_spans(const RatingReport& report) {
  std::vector<GoldEntity> out;
  for (const auto& e : report.entities) out.push_back({e.type, e.span});
  return out;
}

MetricReport evaluate_entities(const std::map<std::string, std::vector<int>>& pred,
                               const std::map<std::string, std::vector<int>>& gold) {
  std::vector<int> p, g;
  for (const auto& [id, labels] : pred) {
    auto it = gold.find(id);
    if (it == gold.end()) throw Error(ErrorCode::kMissingGold, id);
    if (it->second.size() != labels.size()) throw Error(ErrorCode::kAlignmentError, "token count differs for " + id);
    p.insert(p.end(), labels.begin(), labels.end());
    g.insert(g.end(), it->second.begin(), it->second.end());
  }
  MetricReport report;
  report.title = "Entity extraction (token level)";
  report.items = p.size();
  for (TokenLabel l : {TokenLabel::kDefect, TokenLabel::kLocation, TokenLabel::kFrequency, TokenLabel::kSize}) {
    MetricRow row = metrics(confusion_counts(p, g, static_cast<int>(l)), std::string(token_label_row_name(l)));
    row.extension = l == TokenLabel::kSize;
    report.rows.push_back(std::move(row));
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < p.size(); ++i) same += p[i] == g[i] ? 1 : 0;
  report.overall_accuracy = ratio(same, p.size());
  add_to_macro(report.rows, report.macro);
  report.notes = {std::string(kFormulaNote), std::string(kUndefinedNote),
                  "Size of defect is an extension row and is left out of the macro average",
                  "token-level one-vs-rest counts over all tokens, negated mentions included"};
  return report;
}

MetricReport evaluate_entity_spans(const std::map<std::string, std::vector<GoldEntity>>& pred,
                                   const std::map<std::string, std::vector<GoldEntity>>& gold) {
  std::map<EntityType, ConfusionCounts> counts;
  std::size_t items = 0;
  for (const auto& [id, spans] : pred) {
    auto it = gold.find(id);
    if (it == gold.end()) throw Error(ErrorCode::kMissingGold, id);
    for (EntityType t : kEntityTypes) {
      std::multiset<std::pair<std::size_t, std::size_t>> ps, gs;
      for (const auto& e : spans) {
        if (e.type == t) ps.insert({e.span.begin, e.span.end});
      }
      for (const auto& e : it->second) {
        if (e.type == t) gs.insert({e.span.begin, e.span.end});
      }
      items += gs.size();
      ConfusionCounts& c = counts[t];
      for (const auto& s : ps) {
        auto g = gs.find(s);
        if (g != gs.end()) {
          ++c.tp;
          gs.erase(g);
        } else {
          ++c.fp;
        }
      }
      c.fn += gs.size();
    }
  }
  MetricReport report;
  report.title = "Entity extraction (exact spans)";
  report.items = items;
  for (EntityType t : {EntityType::kDefect, EntityType::kLocationOfDefect, EntityType::kFrequencyOfDefects,
                       EntityType::kSizeOfDefect}) {
    MetricRow row = metrics(counts[t], std::string(token_label_row_name(token_label(t))));
    row.accuracy.reset();
    row.specificity.reset();
    row.extension = t == EntityType::kSizeOfDefect;
    report.rows.push_back(std::move(row));
  }
  add_to_macro(report.rows, report.macro);
  report.notes = {std::string(kFormulaNote), std::string(kUndefinedNote),
                  "exact span matching has no true negatives, so accuracy and specificity are undefined",
                  "Size of defect is an extension row and is left out of the macro average"};
  return report;
}

MetricReport evaluate_ratings(const std::map<std::string, int>& pred, const std::map<std::string, int>& gold) {
  std::vector<int> p, g;
  for (const auto& [id, rating] : pred) {
    auto it = gold.find(id);
    if (it == gold.end()) throw Error(ErrorCode::kMissingGold, id);
    p.push_back(rating);
    g.push_back(it->second);
  }
  MetricReport report;
  report.title = "Defect rating";
  report.items = p.size();
  for (int r = 1; r <= 5; ++r) {
    report.rows.push_back(metrics(confusion_counts(p, g, r), "Rating " + std::to_string(r)));
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < p.size(); ++i) same += p[i] == g[i] ? 1 : 0;
  report.overall_accuracy = ratio(same, p.size());
  add_to_macro(report.rows, report.macro);
  report.notes = {std::string(kFormulaNote), std::string(kUndefinedNote)};
  return report;
}

std::vector<AgreementRow> annotator_agreement(const std::vector<GoldRecord>& records) {
  std::set<std::string> annotators;
  for (const auto& r : records) annotators.insert(r.annotator_id);
  if (annotators.size() < 2) return {};
  const std::string first = *annotators.begin();
  const std::string second = *std::next(annotators.begin());
  std::map<std::string, int> a, b;
  for (const auto& r : records) {
    if (r.annotator_id == first) a[r.document_id] = r.rating;
    if (r.annotator_id == second) b[r.document_id] = r.rating;
  }
  std::vector<int> la, lb;
  for (const auto& [id, rating] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    la.push_back(rating);
    lb.push_back(it->second);
  }
  std::vector<AgreementRow> rows;
  rows.push_back({"Overall", cohens_kappa(la, lb)});
  for (int r = 1; r <= 5; ++r) {
    std::vector<int> ba, bb;
    for (std::size_t i = 0; i < la.size(); ++i) {
      ba.push_back(la[i] == r ? 1 : 0);
      bb.push_back(lb[i] == r ? 1 : 0);
    }
    rows.push_back({"Rating " + std::to_string(r), cohens_kappa(ba, bb)});
  }
  return rows;
}

std::string report_to_csv(const MetricReport& report) {
  std::ostringstream out;
  out << "label,Accuracy,Recall,Specificity,Precision,F1\n";
  const auto line = [&](const MetricRow& r) {
    out << r.label << ',' << percent(r.accuracy) << ',' << percent(r.recall) << ',' << percent(r.specificity) << ','
        << percent(r.precision) << ',' << percent(r.f1) << '\n';
  };
  for (const auto& r : report.rows) line(r);
  line(report.macro);
  if (report.overall_accuracy) out << "# overall accuracy " << percent(report.overall_accuracy) << '\n';
  for (const auto& n : report.notes) out << "# " << n << '\n';
  return out.str();
}

std::string report_to_json(const MetricReport& report) {
  Json j;
  j["title"] = report.title;
  j["items"] = report.items;
  Json rows = Json::array();
  for (const auto& r : report.rows) rows.push_back(row_json(r));
  j["rows"] = std::move(rows);
  j["macro"] = row_json(report.macro);
  j["overall_accuracy"] = fraction(report.overall_accuracy);
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string agreement_to_csv(const std::vector<AgreementRow>& rows) {
  std::ostringstream out;
  out << "label,kappa\n";
  for (const auto& r : rows) {
    out << r.label << ',';
    if (r.kappa) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", *r.kappa);
      out << buf;
    } else {
      out << "n/a";
    }
    out << '\n';
  }
  out << "# kappa per rating class is binarized one-vs-rest\n";
  return out.str();
}

}  // namespace piperate
