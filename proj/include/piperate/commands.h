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

// Subcommands of the piperate tool. Each returns the process exit code:
// 0 success, 1 failure while processing, 2 usage or configuration error.

#ifndef PIPERATE_COMMANDS_H_
#define PIPERATE_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "piperate/config.h"
#include "piperate/pipeline.h"

namespace piperate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandIo {
  std::ostream& out;
  std::ostream& err;
  bool verbose = false;
};

// Loads negation triggers, abbreviations, base words, patterns and the
// lexicon file named by the config.
Resources load_resources(const PipelineConfig& config);

int cmd_build_lexicon(const PipelineConfig& config, CommandIo io);

// Documents go to paths.corpus_dir as <id>.txt, gold to paths.gold.
int cmd_generate(const PipelineConfig& config, std::optional<long> documents, CommandIo io);

int cmd_train(const PipelineConfig& config, CommandIo io);

struct RateOptions {
  // A .txt file or a directory of them.
  std::filesystem::path input;
  std::string tagger = "dict";
  std::optional<std::filesystem::path> out_dir;
  // Restrict to one side of the split file: "train", "test" or "all".
  std::string subset = "all";
};

int cmd_rate(const PipelineConfig& config, const RateOptions& options, CommandIo io);

struct EvaluateOptions {
  std::filesystem::path pred;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> docs;
  std::optional<std::filesystem::path> out_dir;
  bool span_mode = false;
};

int cmd_evaluate(const PipelineConfig& config, const EvaluateOptions& options, CommandIo io);

}  // namespace piperate

#endif  // PIPERATE_COMMANDS_H_
