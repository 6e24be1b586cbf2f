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

#include "piperate/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>
#include <map>
#include <sstream>

#include "piperate/corpus.h"
#include "piperate/error.h"
#include "piperate/lexicon.h"
#include "piperate/strings.h"

namespace piperate {
namespace {

namespace pt = boost::property_tree;

template <typename T>
T number(const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) throw Error(ErrorCode::kConfigError, "not a number: " + value);
  return out;
}

template <std::size_t N>
std::array<double, N> number_list(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != N) throw Error(ErrorCode::kConfigError, key + " needs " + std::to_string(N) + " values");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number<double>(std::string(trim(parts[i])));
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }

  PipelineConfig c;
  const auto path = [&](std::filesystem::path& out) {
    return [&out, &base_dir](const std::string& v) {
      const std::filesystem::path p(v);
      out = p.is_absolute() ? p : base_dir / p;
    };
  };
  // Artifact defaults are relative to the config file too.
  for (auto* p : {&c.paths.lexicon, &c.paths.corpus_dir, &c.paths.gold, &c.paths.model, &c.paths.loss_log,
                  &c.paths.split, &c.paths.reports_dir, &c.paths.metrics_dir}) {
    *p = base_dir / *p;
  }

  using Setter = std::function<void(const std::string&)>;
  std::map<std::string, Setter> setters = {
      {"run.seed", [&](const std::string& v) { c.seed = number<std::uint64_t>(v); }},
      {"paths.seeds", path(c.paths.seeds)},
      {"paths.synonyms", path(c.paths.synonyms)},
      {"paths.blacklist", path(c.paths.blacklist)},
      {"paths.negation_triggers", path(c.paths.negation_triggers)},
      {"paths.abbreviations", path(c.paths.abbreviations)},
      {"paths.size_patterns", path(c.paths.size_patterns)},
      {"paths.base_words", path(c.paths.base_words)},
      {"paths.lexicon", path(c.paths.lexicon)},
      {"paths.corpus_dir", path(c.paths.corpus_dir)},
      {"paths.gold", path(c.paths.gold)},
      {"paths.model", path(c.paths.model)},
      {"paths.loss_log", path(c.paths.loss_log)},
      {"paths.split", path(c.paths.split)},
      {"paths.reports_dir", path(c.paths.reports_dir)},
      {"paths.metrics_dir", path(c.paths.metrics_dir)},
      {"lexicon.max_depth", [&](const std::string& v) { c.max_depth = number<int>(v); }},
      {"split.train_ratio", [&](const std::string& v) { c.train_ratio = number<double>(v); }},
      {"generator.documents",
       [&](const std::string& v) { c.generator.documents = number<std::size_t>(v); }},
      {"generator.id_prefix", [&](const std::string& v) { c.generator.id_prefix = v; }},
      {"generator.annotator", [&](const std::string& v) { c.generator.annotator = v; }},
      {"generator.rating_weights",
       [&](const std::string& v) { c.generator.rating_weights = number_list<5>("generator.rating_weights", v); }},
      {"generator.location_weights",
       [&](const std::string& v) { c.generator.location_weights = number_list<4>("generator.location_weights", v); }},
      {"generator.negated_sentence_probability",
       [&](const std::string& v) { c.generator.negated_sentence_probability = number<double>(v); }},
      {"generator.size_probability",
       [&](const std::string& v) { c.generator.size_probability = number<double>(v); }},
      {"generator.typo_probability",
       [&](const std::string& v) { c.generator.typo_probability = number<double>(v); }},
      {"generator.max_filler_sentences",
       [&](const std::string& v) { c.generator.max_filler_sentences = number<std::size_t>(v); }},
      {"tagger.word_dim", [&](const std::string& v) { c.hyper.word_dim = number<std::size_t>(v); }},
      {"tagger.dict_dim", [&](const std::string& v) { c.hyper.dict_dim = number<std::size_t>(v); }},
      {"tagger.hidden", [&](const std::string& v) { c.hyper.hidden = number<std::size_t>(v); }},
      {"tagger.batch_size", [&](const std::string& v) { c.hyper.batch_size = number<std::size_t>(v); }},
      {"tagger.epochs", [&](const std::string& v) { c.hyper.epochs = number<std::size_t>(v); }},
      {"tagger.learning_rate", [&](const std::string& v) { c.hyper.learning_rate = number<double>(v); }},
      {"tagger.beta1", [&](const std::string& v) { c.hyper.beta1 = number<double>(v); }},
      {"tagger.beta2", [&](const std::string& v) { c.hyper.beta2 = number<double>(v); }},
      {"tagger.epsilon", [&](const std::string& v) { c.hyper.epsilon = number<double>(v); }},
      {"tagger.clip_norm", [&](const std::string& v) { c.hyper.clip_norm = number<double>(v); }},
      {"tagger.init_range", [&](const std::string& v) { c.hyper.init_range = number<double>(v); }},
      {"weights.frequency", [&](const std::string& v) { c.weights.frequency = number_list<5>("weights.frequency", v); }},
      {"weights.location_one", [&](const std::string& v) { c.weights.location_one = number<double>(v); }},
      {"weights.location_other", [&](const std::string& v) { c.weights.location_other = number<double>(v); }},
      {"weights.defect", [&](const std::string& v) { c.weights.defect = number_list<3>("weights.defect", v); }},
  };

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::kConfigError, "key outside a section: " + section);
    }
    for (const auto& [key, node] : body) {
      const std::string value(trim(node.data()));
      if (section == "frequency_bands") {
        const int band = number<int>(value);
        if (band < 0 || band > 4) throw Error(ErrorCode::kConfigError, "band out of range for " + key);
        c.weights.frequency_bands[normalize_term(key)] = band;
        continue;
      }
      auto it = setters.find(section + "." + key);
      if (it == setters.end()) throw Error(ErrorCode::kConfigError, "unknown key " + section + "." + key);
      try {
        it->second(value);
      } catch (const Error&) {
        throw Error(ErrorCode::kConfigError, "bad value for " + section + "." + key + ": " + value);
      }
    }
  }
  if (c.max_depth < 0) throw Error(ErrorCode::kConfigError, "lexicon.max_depth must be >= 0");
  if (!(c.train_ratio > 0.0 && c.train_ratio < 1.0)) throw Error(ErrorCode::kConfigError, "train_ratio outside (0,1)");
  if (c.hyper.hidden == 0 || c.hyper.word_dim == 0 || c.hyper.dict_dim == 0 || c.hyper.batch_size == 0) {
    throw Error(ErrorCode::kConfigError, "tagger dimensions must be positive");
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kConfigError, "cannot read config " + path.string());
  }
  return parse(text, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace piperate
