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

// Central finite-difference check of the tagger's analytic gradients.

#ifndef PIPERATE_TESTS_GRADIENT_CHECK_H_
#define PIPERATE_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "piperate/bilstm.h"
#include "piperate/random.h"

namespace piperate::testing {

struct GradientProbe {
  std::string tensor;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

struct GradientCheck {
  std::vector<GradientProbe> probes;
  // Draws rejected because the analytic gradient was below the floor.
  std::size_t skipped = 0;
  double worst = 0.0;
};

// Checks `count` parameters drawn uniformly over tensors, then over entries.
// Entries whose analytic gradient is below `floor` in magnitude are redrawn:
// there the finite difference is dominated by rounding in the loss, not by
// the derivative.
inline GradientCheck check_gradients(const TaggerModel& model, std::span<const TrainingExample> batch,
                                     std::size_t count, std::uint64_t seed, double step = 1e-5,
                                     double floor = 1e-6) {
  TaggerModel grads;
  loss_and_gradients(model, batch, &grads);
  TaggerModel probe = model;
  auto params = probe.parameters();
  const auto grad_params = grads.parameters();
  const auto& names = TaggerModel::parameter_names();

  GradientCheck out;
  Rng rng(seed);
  while (out.probes.size() < count && out.skipped < 100000) {
    const std::size_t t = rng.below(params.size());
    if (params[t]->size() == 0) continue;
    const std::size_t i = rng.below(params[t]->size());
    const double analytic = grad_params[t]->data[i];
    if (std::abs(analytic) < floor) {
      ++out.skipped;
      continue;
    }
    double& w = params[t]->data[i];
    const double saved = w;
    w = saved + step;
    const double plus = loss_and_gradients(probe, batch);
    w = saved - step;
    const double minus = loss_and_gradients(probe, batch);
    w = saved;
    const double numeric = (plus - minus) / (2 * step);
    const double rel = std::abs(analytic - numeric) / std::max(std::abs(analytic), std::abs(numeric));
    out.probes.push_back({names[t], i, analytic, numeric, rel});
    out.worst = std::max(out.worst, rel);
  }
  return out;
}

// Short random sentences over a small vocabulary.
inline std::vector<TrainingExample> random_examples(Rng& rng, std::size_t n, std::size_t max_len,
                                                    const std::vector<std::string>& words) {
  std::vector<TrainingExample> out;
  for (std::size_t s = 0; s < n; ++s) {
    TrainingExample ex;
    const std::size_t len = 1 + rng.below(max_len);
    for (std::size_t k = 0; k < len; ++k) {
      ex.words.push_back(rng.pick(words));
      ex.features.push_back(static_cast<Tag>(rng.below(kNumTags)));
      ex.tags.push_back(static_cast<Tag>(rng.below(kNumTags)));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace piperate::testing

#endif  // PIPERATE_TESTS_GRADIENT_CHECK_H_
