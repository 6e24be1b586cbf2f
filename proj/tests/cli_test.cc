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

// Runs the piperate binary end to end against a scratch configuration.

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "doctest.h"
#include "piperate/corpus.h"
#include "test_util.h"

namespace piperate {
namespace {

namespace fs = std::filesystem;
using testing::ScratchDir;

// Small tagger so the whole chain runs in seconds.
std::string scratch_config(const ScratchDir& dir, const std::string& blacklist = "blacklist.tsv") {
  const fs::path data(PIPERATE_DATA_DIR);
  std::string text = "[run]\nseed = 3\n[paths]\n";
  text += "seeds = " + (data / "seeds.tsv").string() + "\n";
  text += "synonyms = " + (data / "synonyms.tsv").string() + "\n";
  text += "blacklist = " + (data / blacklist).string() + "\n";
  text += "negation_triggers = " + (data / "negation_triggers.txt").string() + "\n";
  text += "abbreviations = " + (data / "abbreviations.txt").string() + "\n";
  text += "size_patterns = " + (data / "size_patterns.tsv").string() + "\n";
  text += "base_words = " + (data / "base_words.txt").string() + "\n";
  text += "[generator]\ndocuments = 20\n";
  text += "[tagger]\nword_dim = 8\ndict_dim = 4\nhidden = 6\nbatch_size = 8\nepochs = 2\n";
  const fs::path path = dir / "test.conf";
  write_file(path, text);
  return path.string();
}

int run(const std::string& args, const ScratchDir& dir) {
  const std::string cmd = std::string(PIPERATE_CLI) + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_CASE("usage errors exit 2") {
  ScratchDir dir("cli_usage");
  CHECK(run("", dir) == 2);
  CHECK(run("frobnicate", dir) == 2);
  CHECK(run("--help", dir) == 0);
  CHECK(run("--config " + (dir / "missing.conf").string() + " build-lexicon", dir) == 2);
  CHECK(read_file(dir / "stderr.txt").rfind("error: ", 0) == 0);
  CHECK(run("--config " + scratch_config(dir, "no_such_blacklist.tsv") + " build-lexicon", dir) == 2);
  CHECK(run("--config " + scratch_config(dir) + " rate", dir) == 2);
}

TEST_CASE("full chain") {
  ScratchDir dir("cli_chain");
  const std::string config = "--config " + scratch_config(dir) + " ";
  REQUIRE(run(config + "build-lexicon", dir) == 0);
  const std::string lexicon = read_file(dir / "out/lexicon.tsv");
  REQUIRE(run(config + "build-lexicon", dir) == 0);
  CHECK(read_file(dir / "out/lexicon.tsv") == lexicon);

  REQUIRE(run(config + "generate -n 20", dir) == 0);
  CHECK(std::distance(fs::directory_iterator(dir / "out/corpus"), fs::directory_iterator{}) == 20);
  CHECK(fs::exists(dir / "out/gold.tsv"));

  REQUIRE(run(config + "train", dir) == 0);
  CHECK(fs::exists(dir / "out/model.bin"));
  CHECK(fs::exists(dir / "out/split.tsv"));

  REQUIRE(run(config + "rate " + (dir / "out/corpus").string(), dir) == 0);
  const std::string summary = read_file(dir / "out/reports/summary.csv");
  CHECK(summary.rfind("doc_id,rating,w_frequencies,w_location,w_defect,gap_row,tagger\n", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 21);

  const std::string docs = " --docs " + (dir / "out/corpus").string();
  REQUIRE(run(config + "evaluate --pred " + (dir / "out/reports/reports.jsonl").string() + docs, dir) == 0);
  CHECK(read_file(dir / "out/metrics/rating_metrics.csv").find("# overall accuracy 100.0") != std::string::npos);
  CHECK(fs::exists(dir / "out/metrics/entity_metrics.json"));

  const fs::path bilstm = dir / "bilstm";
  REQUIRE(run(config + "rate --tagger bilstm --subset test --out " + bilstm.string() + " " +
                  (dir / "out/corpus").string(),
              dir) == 0);
  const std::string rows = read_file(bilstm / "summary.csv");
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 5);
  CHECK(rows.find(",bilstm\n") != std::string::npos);
  CHECK(run(config + "rate --tagger crf " + (dir / "out/corpus").string(), dir) == 2);

  // Gold that lacks a predicted document.
  write_file(dir / "short_gold.tsv", "doc0001\t1\t-\tx\n");
  CHECK(run(config + "evaluate --gold " + (dir / "short_gold.tsv").string() + " --pred " +
                (dir / "out/reports/reports.jsonl").string() + docs,
            dir) == 2);
}

TEST_CASE("an empty directory rates nothing") {
  ScratchDir dir("cli_empty");
  const std::string config = "--config " + scratch_config(dir) + " ";
  REQUIRE(run(config + "build-lexicon", dir) == 0);
  fs::create_directories(dir / "empty");
  CHECK(run(config + "rate " + (dir / "empty").string(), dir) == 0);
  CHECK(read_file(dir / "out/reports/summary.csv") ==
        "doc_id,rating,w_frequencies,w_location,w_defect,gap_row,tagger\n");
}

}  // namespace
}  // namespace piperate
