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

// INI-style pipeline configuration. Relative paths resolve against the
// directory of the config file.

#ifndef PIPERATE_CONFIG_H_
#define PIPERATE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "piperate/bilstm.h"
#include "piperate/generator.h"
#include "piperate/rating.h"

namespace piperate {

struct PipelinePaths {
  // Lexicon inputs.
  std::filesystem::path seeds;
  std::filesystem::path synonyms;
  std::filesystem::path blacklist;
  // Optional; built-in defaults when empty.
  std::filesystem::path negation_triggers;
  std::filesystem::path abbreviations;
  std::filesystem::path size_patterns;
  std::filesystem::path base_words;
  // Artifacts.
  std::filesystem::path lexicon = "out/lexicon.tsv";
  std::filesystem::path corpus_dir = "out/corpus";
  std::filesystem::path gold = "out/gold.tsv";
  std::filesystem::path model = "out/model.bin";
  std::filesystem::path loss_log = "out/loss.tsv";
  std::filesystem::path split = "out/split.tsv";
  std::filesystem::path reports_dir = "out/reports";
  std::filesystem::path metrics_dir = "out/metrics";
};

struct PipelineConfig {
  PipelinePaths paths;
  std::uint64_t seed = 42;
  int max_depth = 2;
  double train_ratio = 0.8;
  GeneratorConfig generator;
  TaggerHyperparameters hyper;
  WeightTables weights = WeightTables::defaults();

  // Sections: [run] seed; [paths]; [lexicon] max_depth; [split] train_ratio;
  // [generator]; [tagger]; [weights]; [frequency_bands] term = band.
  // Unknown keys throw ConfigError.
  static PipelineConfig parse(std::string_view text, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace piperate

#endif  // PIPERATE_CONFIG_H_
