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

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "metric_oracle.h"
#include "piperate/error.h"
#include "piperate/pipeline.h"
#include "test_util.h"

namespace piperate {
namespace {

using testing::close;
using testing::error_code_of;

TEST_CASE("confusion counts") {
  const std::vector<int> pred = {1, 1, 0, 0, 2};
  const std::vector<int> gold = {1, 0, 1, 0, 2};
  CHECK(confusion_counts(pred, gold, 1) == ConfusionCounts{1, 1, 1, 2});
  CHECK(confusion_counts(pred, gold, 2) == ConfusionCounts{1, 0, 0, 4});
  CHECK(confusion_counts({}, {}, 1) == ConfusionCounts{});
  const std::vector<int> short_gold = {1};
  CHECK(error_code_of([&] { confusion_counts(pred, short_gold, 1); }) == ErrorCode::kAlignmentError);
}

TEST_CASE("metric values") {
  const MetricRow r = metrics({8, 2, 4, 86});
  CHECK(*r.accuracy == doctest::Approx(0.94));
  CHECK(*r.recall == doctest::Approx(8.0 / 12));
  CHECK(*r.specificity == doctest::Approx(86.0 / 88));
  CHECK(*r.precision == doctest::Approx(0.8));
  CHECK(*r.f1 == doctest::Approx(16.0 / 22));
  const MetricRow empty = metrics({0, 0, 0, 5});
  CHECK_FALSE(empty.recall);
  CHECK_FALSE(empty.precision);
  CHECK_FALSE(empty.f1);
  CHECK(*empty.specificity == 1.0);
  const MetricRow none = metrics({});
  CHECK_FALSE(none.accuracy);
}

TEST_CASE("metrics agree with brute force") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [p, g] = testing::random_pair(rng, 1 + trial % 5);
    for (int target = 0; target < 5; ++target) {
      const MetricRow r = metrics(confusion_counts(p, g, target));
      const auto o = testing::oracle_metrics(p, g, target);
      CHECK(static_cast<double>(r.counts.tp) == o.tp);
      CHECK(static_cast<double>(r.counts.tn) == o.tn);
      CHECK(close(r.accuracy, o.accuracy, 1e-12));
      CHECK(close(r.recall, o.recall, 1e-12));
      CHECK(close(r.specificity, o.specificity, 1e-12));
      CHECK(close(r.precision, o.precision, 1e-12));
      CHECK(close(r.f1, o.f1, 1e-12));
    }
  }
}

TEST_CASE("kappa") {
  const std::vector<int> a = {1, 2, 3, 3, 5};
  CHECK(*cohens_kappa(a, a) == 1.0);
  // 40 yes/yes, 10 yes/no, 5 no/yes, 45 no/no.
  std::vector<int> x, y;
  const auto add = [&](int n, int u, int v) {
    for (int i = 0; i < n; ++i) {
      x.push_back(u);
      y.push_back(v);
    }
  };
  add(40, 1, 1);
  add(10, 1, 0);
  add(5, 0, 1);
  add(45, 0, 0);
  CHECK(std::abs(*cohens_kappa(x, y) - 0.7) <= 1e-12);
  CHECK(std::abs(*cohens_kappa(y, x) - 0.7) <= 1e-12);
  // Chance agreement only.
  CHECK(std::abs(*cohens_kappa(std::vector<int>{1, 1, 0, 0}, std::vector<int>{1, 0, 1, 0})) <= 1e-12);
  CHECK_FALSE(cohens_kappa(std::vector<int>{2, 2}, std::vector<int>{2, 2}));
  CHECK_FALSE(cohens_kappa(std::vector<int>{}, std::vector<int>{}));
  CHECK(error_code_of([] { cohens_kappa(std::vector<int>{1}, std::vector<int>{}); }) == ErrorCode::kAlignmentError);
}

TEST_CASE("kappa agrees with a contingency table") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 4;
    const auto [a, b] = testing::random_pair(rng, k);
    CHECK(close(cohens_kappa(a, b), testing::oracle_kappa(a, b, k), 1e-12));
    CHECK(close(cohens_kappa(a, b), cohens_kappa(b, a), 1e-12));
  }
}

TEST_CASE("token labels follow spans") {
  const Document doc = testing::shipped_analyzer().prepare("Leaks at 10 feet.", "d");
  const std::vector<GoldEntity> spans = {{EntityType::kDefect, {0, 5}}, {EntityType::kLocationOfDefect, {9, 16}}};
  CHECK(token_labels(doc, spans) == std::vector<int>{1, 0, 3, 3, 0});
}

TEST_CASE("entity report") {
  const std::map<std::string, std::vector<int>> gold = {{"a", {1, 0, 3, 3, 0}}, {"b", {4, 1, 0}}};
  const std::map<std::string, std::vector<int>> pred = {{"a", {1, 0, 3, 0, 0}}, {"b", {4, 1, 2}}};
  const MetricReport r = evaluate_entities(pred, gold);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].label == "Defects");
  CHECK(*r.rows[0].f1 == 1.0);
  CHECK(*r.rows[1].recall == 0.5);
  CHECK(r.rows[3].extension);
  CHECK_FALSE(r.rows[3].recall);
  CHECK(*r.overall_accuracy == doctest::Approx(6.0 / 8));
  CHECK(*r.macro.precision == 1.0);
  CHECK(r.items == 8);
  CHECK(error_code_of([&] { evaluate_entities({{"c", {0}}}, gold); }) == ErrorCode::kMissingGold);
  CHECK(error_code_of([&] { evaluate_entities({{"a", {0}}}, gold); }) == ErrorCode::kAlignmentError);
}

TEST_CASE("span report") {
  const std::map<std::string, std::vector<GoldEntity>> gold = {
      {"a", {{EntityType::kDefect, {0, 5}}, {EntityType::kLocationOfDefect, {9, 16}}}}};
  const std::map<std::string, std::vector<GoldEntity>> pred = {
      {"a", {{EntityType::kDefect, {0, 5}}, {EntityType::kLocationOfDefect, {9, 12}}}}};
  const MetricReport r = evaluate_entity_spans(pred, gold);
  CHECK(r.rows[0].counts == ConfusionCounts{1, 0, 0, 0});
  CHECK(r.rows[1].counts == ConfusionCounts{0, 1, 1, 0});
  CHECK_FALSE(r.rows[0].accuracy);
  CHECK_FALSE(r.rows[0].specificity);
  CHECK(r.items == 2);
}

TEST_CASE("rating report and CSV") {
  const std::map<std::string, int> gold = {{"a", 5}, {"b", 1}, {"c", 3}, {"d", 3}};
  const std::map<std::string, int> pred = {{"a", 5}, {"b", 1}, {"c", 2}, {"d", 3}};
  const MetricReport r = evaluate_ratings(pred, gold);
  REQUIRE(r.rows.size() == 5);
  CHECK(*r.overall_accuracy == 0.75);
  CHECK(*r.rows[2].recall == 0.5);
  CHECK_FALSE(r.rows[3].recall);
  const std::string csv = report_to_csv(r);
  CHECK(csv.rfind("label,Accuracy,Recall,Specificity,Precision,F1\n", 0) == 0);
  CHECK(csv.find("Rating 5,100.0,100.0,100.0,100.0,100.0\n") != std::string::npos);
  CHECK(csv.find("Rating 4,100.0,n/a,100.0,n/a,n/a\n") != std::string::npos);
  CHECK(csv.find("Macro average,") != std::string::npos);
  CHECK(csv.find("# overall accuracy 75.0\n") != std::string::npos);
  CHECK(csv.find("# precision = TP/(TP+FP) and specificity = TN/(TN+FP)") != std::string::npos);
  CHECK(report_to_json(r).find("\"overall_accuracy\": 0.75") != std::string::npos);
  CHECK(error_code_of([&] { evaluate_ratings({{"z", 1}}, gold); }) == ErrorCode::kMissingGold);
}

TEST_CASE("annotator agreement") {
  std::vector<GoldRecord> records;
  for (int i = 0; i < 10; ++i) {
    records.push_back({"d" + std::to_string(i), 1 + i % 5, {}, "ann1"});
    records.push_back({"d" + std::to_string(i), 1 + i % 5, {}, "ann2"});
  }
  records.push_back({"only", 2, {}, "ann1"});
  const auto rows = annotator_agreement(records);
  REQUIRE(rows.size() == 6);
  CHECK(*rows[0].kappa == 1.0);
  CHECK(rows[3].label == "Rating 3");
  CHECK(agreement_to_csv(rows).rfind("label,kappa\nOverall,1.0000\n", 0) == 0);
  CHECK(annotator_agreement({records[0]}).empty());
}

}  // namespace
}  // namespace piperate
