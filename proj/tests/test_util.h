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

// Shared fixtures: the shipped data files and scratch directories.

#ifndef PIPERATE_TESTS_TEST_UTIL_H_
#define PIPERATE_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>

#include <unistd.h>

#include "piperate/error.h"
#include "piperate/lexicon.h"
#include "piperate/pipeline.h"
#include "piperate/preprocess.h"
#include "piperate/tagger.h"

namespace piperate::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PIPERATE_DATA_DIR) / name;
}

inline Lexicon shipped_lexicon(int max_depth = 2) {
  return expand_synonyms(load_seeds(data_path("seeds.tsv")), SynonymGraph::load(data_path("synonyms.tsv")),
                         Blacklist::load(data_path("blacklist.tsv")), max_depth);
}

inline Resources shipped_resources() {
  Resources r;
  r.lexicon = shipped_lexicon();
  r.triggers = NegationTriggerSet::load(data_path("negation_triggers.txt"));
  r.abbreviations = AbbreviationList::load(data_path("abbreviations.txt"));
  r.base_words = load_word_list(data_path("base_words.txt"));
  r.patterns = PatternTable::load(data_path("size_patterns.tsv"));
  return r;
}

inline const Analyzer& shipped_analyzer() {
  static const Analyzer analyzer(shipped_resources());
  return analyzer;
}

// Code of the piperate::Error thrown by f, or nullopt if f returns.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("piperate_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace piperate::testing

#endif  // PIPERATE_TESTS_TEST_UTIL_H_
