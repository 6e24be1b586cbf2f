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

// Brute-force references for the metric tests: counts by enumerating index
// sets, kappa from an explicit contingency table.

#ifndef PIPERATE_TESTS_METRIC_ORACLE_H_
#define PIPERATE_TESTS_METRIC_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace piperate::testing {

struct OracleMetrics {
  double tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> accuracy, recall, specificity, precision, f1;
};

inline OracleMetrics oracle_metrics(const std::vector<int>& pred, const std::vector<int>& gold, int target) {
  std::set<std::size_t> predicted, actual, all;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    all.insert(i);
    if (pred[i] == target) predicted.insert(i);
    if (gold[i] == target) actual.insert(i);
  }
  std::vector<std::size_t> both, only_pred, only_gold;
  std::set_intersection(predicted.begin(), predicted.end(), actual.begin(), actual.end(), std::back_inserter(both));
  std::set_difference(predicted.begin(), predicted.end(), actual.begin(), actual.end(),
                      std::back_inserter(only_pred));
  std::set_difference(actual.begin(), actual.end(), predicted.begin(), predicted.end(),
                      std::back_inserter(only_gold));
  OracleMetrics m;
  m.tp = static_cast<double>(both.size());
  m.fp = static_cast<double>(only_pred.size());
  m.fn = static_cast<double>(only_gold.size());
  m.tn = static_cast<double>(all.size()) - m.tp - m.fp - m.fn;
  const auto div = [](double a, double b) -> std::optional<double> {
    if (b == 0) return std::nullopt;
    return a / b;
  };
  m.accuracy = div(m.tp + m.tn, static_cast<double>(all.size()));
  m.recall = div(m.tp, static_cast<double>(actual.size()));
  m.specificity = div(m.tn, static_cast<double>(all.size() - actual.size()));
  m.precision = div(m.tp, static_cast<double>(predicted.size()));
  // Harmonic mean written as 2TP / (2TP + FP + FN); undefined without hits.
  if (m.tp > 0) m.f1 = 2 * m.tp / (2 * m.tp + m.fp + m.fn);
  return m;
}

inline bool close(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= tol;
}

// Label lists of length 1..50 over labels 0..k-1.
inline std::pair<std::vector<int>, std::vector<int>> random_pair(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<int> len(1, 50), lab(0, k - 1);
  const int n = len(rng);
  std::vector<int> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = lab(rng);
    b[i] = lab(rng);
  }
  return {a, b};
}

// Kappa from a k x k contingency table.
inline std::optional<double> oracle_kappa(const std::vector<int>& a, const std::vector<int>& b, int k) {
  std::vector<std::vector<double>> t(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) t[a[i]][b[i]] += 1;
  const double n = static_cast<double>(a.size());
  double po = 0, pe = 0;
  for (int i = 0; i < k; ++i) {
    po += t[i][i] / n;
    double row = 0, col = 0;
    for (int j = 0; j < k; ++j) {
      row += t[i][j];
      col += t[j][i];
    }
    pe += (row / n) * (col / n);
  }
  if (pe == 1.0) return std::nullopt;
  return (po - pe) / (1 - pe);
}

}  // namespace piperate::testing

#endif  // PIPERATE_TESTS_METRIC_ORACLE_H_
