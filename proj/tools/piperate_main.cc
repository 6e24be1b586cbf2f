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

// piperate: build the lexicon, generate a synthetic corpus, train the
// tagger, rate documents and evaluate the ratings.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "piperate/commands.h"
#include "piperate/config.h"
#include "piperate/error.h"

int main(int argc, char** argv) {
  CLI::App app{"Pipe inspection report defect rating"};
  app.require_subcommand(1);

  std::string config_path = "config/pipeline.conf";
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "Configuration file")->capture_default_str();
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_flag("--verbose,-v", verbose, "Progress and diagnostics on stderr");

  auto* build = app.add_subcommand("build-lexicon", "Expand the seed terms into the lexicon file");

  std::optional<long> documents;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus with gold annotations");
  generate->add_option("n,-n,--documents", documents, "Number of documents");

  auto* train = app.add_subcommand("train", "Train the Bi-LSTM tagger on the training split");

  piperate::RateOptions rate_options;
  std::optional<std::string> rate_out;
  auto* rate = app.add_subcommand("rate", "Rate documents");
  rate->add_option("input", rate_options.input, "Document file or directory")->required();
  rate->add_option("--tagger", rate_options.tagger, "dict or bilstm")->capture_default_str();
  rate->add_option("--subset", rate_options.subset, "all, train or test (needs the split file)")
      ->capture_default_str();
  rate->add_option("--out", rate_out, "Output directory");

  piperate::EvaluateOptions eval_options;
  std::optional<std::string> eval_gold, eval_docs, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score rating reports against gold annotations");
  evaluate->add_option("--pred", eval_options.pred, "reports.jsonl from rate")->required();
  evaluate->add_option("--gold", eval_gold, "Gold file");
  evaluate->add_option("--docs", eval_docs, "Document directory");
  evaluate->add_option("--out", eval_out, "Output directory");
  evaluate->add_flag("--spans", eval_options.span_mode, "Exact span matching instead of token level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : piperate::kExitUsage;
  }

  piperate::PipelineConfig config;
  try {
    config = piperate::PipelineConfig::load(config_path);
  } catch (const piperate::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return piperate::kExitUsage;
  }
  if (seed) config.seed = *seed;
  const piperate::CommandIo io{std::cout, std::cerr, verbose};

  if (*build) return piperate::cmd_build_lexicon(config, io);
  if (*generate) return piperate::cmd_generate(config, documents, io);
  if (*train) return piperate::cmd_train(config, io);
  if (*rate) {
    if (rate_out) rate_options.out_dir = *rate_out;
    return piperate::cmd_rate(config, rate_options, io);
  }
  if (*evaluate) {
    if (eval_gold) eval_options.gold = *eval_gold;
    if (eval_docs) eval_options.docs = *eval_docs;
    if (eval_out) eval_options.out_dir = *eval_out;
    return piperate::cmd_evaluate(config, eval_options, io);
  }
  return piperate::kExitUsage;
}
