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

#include "piperate/commands.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "piperate/error.h"
#include "piperate/evaluation.h"
#include "piperate/generator.h"
#include "piperate/lexicon.h"

namespace piperate {
namespace {

namespace fs = std::filesystem;

int guarded(CommandIo io, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kNumericalError ? kExitFailure : kExitUsage;
  } catch (const fs::filesystem_error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

void require_file(const fs::path& path, std::string_view what) {
  if (path.empty()) throw Error(ErrorCode::kConfigError, std::string(what) + " path is not configured");
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIoError, std::string(what) + " not found: " + path.string());
  }
}

std::string format_loss(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// First record per document, in file order.
std::map<std::string, GoldRecord> gold_by_document(const std::vector<GoldRecord>& records) {
  std::map<std::string, GoldRecord> out;
  for (const auto& r : records) out.emplace(r.document_id, r);
  return out;
}

std::vector<fs::path> text_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

Resources load_resources(const PipelineConfig& config) {
  Resources r;
  const auto& p = config.paths;
  if (!fs::is_regular_file(p.lexicon)) {
    throw Error(ErrorCode::kLexiconRequired, "no lexicon at " + p.lexicon.string() + "; run build-lexicon first");
  }
  r.lexicon = Lexicon::load(p.lexicon);
  if (!p.negation_triggers.empty()) {
    require_file(p.negation_triggers, "negation trigger file");
    r.triggers = NegationTriggerSet::load(p.negation_triggers);
  }
  if (!p.abbreviations.empty()) {
    require_file(p.abbreviations, "abbreviation file");
    r.abbreviations = AbbreviationList::load(p.abbreviations);
  }
  if (!p.base_words.empty()) {
    require_file(p.base_words, "base word file");
    r.base_words = load_word_list(p.base_words);
  }
  if (!p.size_patterns.empty()) {
    require_file(p.size_patterns, "pattern file");
    r.patterns = PatternTable::load(p.size_patterns);
  }
  r.weights = config.weights;
  return r;
}

int cmd_build_lexicon(const PipelineConfig& config, CommandIo io) {
  return guarded(io, [&] {
    require_file(config.paths.seeds, "seed file");
    require_file(config.paths.synonyms, "synonym graph");
    require_file(config.paths.blacklist, "blacklist");
    const auto seeds = load_seeds(config.paths.seeds);
    const auto graph = SynonymGraph::load(config.paths.synonyms);
    const auto blacklist = Blacklist::load(config.paths.blacklist);
    ExpansionLog log;
    const Lexicon lexicon = expand_synonyms(seeds, graph, blacklist, config.max_depth, &log);
    lexicon.save(config.paths.lexicon);
    for (Category c : {Category::kDefect, Category::kLocation, Category::kFrequency}) {
      io.out << category_name(c) << '\t' << lexicon.count(c) << '\n';
    }
    io.out << "total\t" << lexicon.size() << '\n';
    if (io.verbose) {
      for (const auto& w : log.warnings) io.err << "warning: " << w << '\n';
      for (const auto& [seed, antonym] : log.antonyms) io.err << "antonym of " << seed << ": " << antonym << '\n';
    }
    return kExitOk;
  });
}

int cmd_generate(const PipelineConfig& config, std::optional<long> documents, CommandIo io) {
  return guarded(io, [&] {
    const long n = documents.value_or(static_cast<long>(config.generator.documents));
    if (n <= 0) {
      io.err << "error: document count must be positive\n";
      return kExitUsage;
    }
    GeneratorConfig gen = config.generator;
    gen.documents = static_cast<std::size_t>(n);
    const Analyzer analyzer(load_resources(config));
    const GeneratedCorpus corpus = generate_synthetic_corpus(gen, analyzer, config.seed);

    const fs::path& dir = config.paths.corpus_dir;
    if (fs::is_directory(dir)) {
      for (const auto& old : text_files(dir)) fs::remove(old);
    }
    for (const auto& doc : corpus.documents) write_file(dir / (doc.id + ".txt"), doc.raw);
    write_file(config.paths.gold, format_gold(corpus.gold));

    // The dictionary pipeline must reproduce every gold rating.
    const DictionaryTagger tagger(analyzer.resources().lexicon);
    std::size_t consistent = 0;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      if (rate_document(corpus.documents[i], analyzer, tagger).rating.value == corpus.gold[i].rating) ++consistent;
    }
    io.out << "documents\t" << corpus.documents.size() << '\n';
    io.out << "consistent\t" << consistent << '\n';
    std::map<int, std::size_t> per_rating;
    for (const auto& g : corpus.gold) ++per_rating[g.rating];
    for (const auto& [rating, count] : per_rating) io.out << "rating " << rating << '\t' << count << '\n';
    if (consistent != corpus.documents.size()) {
      io.err << "error: " << corpus.documents.size() - consistent << " documents disagree with their gold rating\n";
      return kExitFailure;
    }
    return kExitOk;
  });
}

int cmd_train(const PipelineConfig& config, CommandIo io) {
  return guarded(io, [&] {
    const Analyzer analyzer(load_resources(config));
    require_file(config.paths.gold, "gold file");
    const auto gold = gold_by_document(parse_gold(read_file(config.paths.gold)));
    if (!fs::is_directory(config.paths.corpus_dir)) {
      throw Error(ErrorCode::kIoError, "corpus directory not found: " + config.paths.corpus_dir.string());
    }
    std::map<std::string, Document> docs;
    for (auto& doc : load_documents(config.paths.corpus_dir)) {
      if (gold.count(doc.id)) {
        docs.emplace(doc.id, std::move(doc));
      } else if (io.verbose) {
        io.err << "warning: no gold for " << doc.id << '\n';
      }
    }
    std::vector<std::string> ids;
    for (const auto& [id, doc] : docs) ids.push_back(id);
    const CorpusSplit split = split_corpus(ids, config.train_ratio, config.seed);
    write_file(config.paths.split, format_split(split));

    std::vector<TrainingExample> examples;
    for (const auto& id : split.train) {
      Document& doc = docs.at(id);
      validate_gold(gold.at(id), doc);
      analyzer.process(doc);
      for (auto& ex : training_examples(doc, gold.at(id).entities, analyzer)) examples.push_back(std::move(ex));
    }
    if (examples.empty()) {
      io.err << "error: empty training set\n";
      return kExitUsage;
    }
    const auto start = std::chrono::steady_clock::now();
    const TrainResult result = train(examples, config.hyper, config.seed, [&](std::size_t epoch, double loss) {
      if (io.verbose) io.err << "epoch " << epoch << " loss " << format_loss(loss) << '\n';
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.model.save(config.paths.model);

    std::ostringstream log;
    log << "# initial\t" << format_loss(result.initial_loss) << "\nepoch\tloss\n";
    for (std::size_t i = 0; i < result.epoch_losses.size(); ++i) {
      log << i + 1 << '\t' << format_loss(result.epoch_losses[i]) << '\n';
    }
    write_file(config.paths.loss_log, log.str());
    io.out << "train_documents\t" << split.train.size() << '\n';
    io.out << "test_documents\t" << split.test.size() << '\n';
    io.out << "sentences\t" << examples.size() << '\n';
    io.out << "vocabulary\t" << result.model.vocab.size() << '\n';
    io.out << "initial_loss\t" << format_loss(result.initial_loss) << '\n';
    io.out << "final_loss\t" << format_loss(result.epoch_losses.empty() ? result.initial_loss
                                                                       : result.epoch_losses.back())
           << '\n';
    if (io.verbose) io.err << "training took " << seconds << " s\n";
    return kExitOk;
  });
}

int cmd_rate(const PipelineConfig& config, const RateOptions& options, CommandIo io) {
  return guarded(io, [&] {
    if (options.tagger != "dict" && options.tagger != "bilstm") {
      io.err << "error: --tagger must be dict or bilstm\n";
      return kExitUsage;
    }
    if (options.subset != "all" && options.subset != "train" && options.subset != "test") {
      io.err << "error: --subset must be all, train or test\n";
      return kExitUsage;
    }
    const Analyzer analyzer(load_resources(config));
    std::optional<TaggerModel> model;
    std::unique_ptr<EntityTagger> tagger;
    if (options.tagger == "bilstm") {
      require_file(config.paths.model, "model file");
      model = TaggerModel::load(config.paths.model);
      tagger = std::make_unique<BiLstmTagger>(analyzer.resources().lexicon, *model);
    } else {
      tagger = std::make_unique<DictionaryTagger>(analyzer.resources().lexicon);
    }

    std::vector<fs::path> files;
    if (fs::is_directory(options.input)) {
      files = text_files(options.input);
    } else if (fs::is_regular_file(options.input)) {
      files.push_back(options.input);
    } else {
      throw Error(ErrorCode::kIoError, "input not found: " + options.input.string());
    }
    if (options.subset != "all") {
      require_file(config.paths.split, "split file");
      const CorpusSplit split = parse_split(read_file(config.paths.split));
      const auto& keep = options.subset == "train" ? split.train : split.test;
      const std::set<std::string> ids(keep.begin(), keep.end());
      std::erase_if(files, [&](const fs::path& f) { return !ids.count(f.stem().string()); });
    }

    std::vector<RatingReport> reports;
    std::size_t failures = 0;
    for (const auto& file : files) {
      const std::string id = file.stem().string();
      try {
        reports.push_back(rate_document(parse_document(read_file(file), id), analyzer, *tagger));
      } catch (const Error& e) {
        RatingReport r;
        r.document_id = id;
        r.error = e.what();
        reports.push_back(std::move(r));
        ++failures;
        io.err << "warning: " << id << ": " << e.what() << '\n';
      }
    }
    std::sort(reports.begin(), reports.end(),
              [](const RatingReport& a, const RatingReport& b) { return a.document_id < b.document_id; });
    std::string jsonl;
    for (const auto& r : reports) jsonl += report_to_json(r) + "\n";
    const fs::path out_dir = options.out_dir.value_or(config.paths.reports_dir);
    write_file(out_dir / "reports.jsonl", jsonl);
    write_file(out_dir / "summary.csv", reports_to_csv(reports));
    io.out << "rated\t" << reports.size() - failures << '\n';
    io.out << "errors\t" << failures << '\n';
    if (io.verbose) io.out << reports_to_csv(reports);
    return !reports.empty() && failures == reports.size() ? kExitFailure : kExitOk;
  });
}

int cmd_evaluate(const PipelineConfig& config, const EvaluateOptions& options, CommandIo io) {
  return guarded(io, [&] {
    require_file(options.pred, "prediction file");
    const fs::path gold_path = options.gold.value_or(config.paths.gold);
    const fs::path docs_dir = options.docs.value_or(config.paths.corpus_dir);
    require_file(gold_path, "gold file");
    const auto records = parse_gold(read_file(gold_path));
    const auto gold = gold_by_document(records);
    const auto reports = parse_reports(read_file(options.pred));

    std::vector<std::string> missing;
    for (const auto& r : reports) {
      if (!gold.count(r.document_id)) missing.push_back(r.document_id);
    }
    if (!missing.empty()) {
      io.err << "error: no gold record for:";
      for (const auto& id : missing) io.err << ' ' << id;
      io.err << '\n';
      return kExitUsage;
    }

    const Analyzer analyzer(load_resources(config));
    std::map<std::string, std::vector<int>> pred_tokens, gold_tokens;
    std::map<std::string, std::vector<GoldEntity>> pred_spans, gold_spans;
    std::map<std::string, int> pred_ratings, gold_ratings;
    std::size_t skipped = 0;
    for (const auto& r : reports) {
      if (r.error) {
        ++skipped;
        continue;
      }
      const GoldRecord& g = gold.at(r.document_id);
      const Document doc = analyzer.prepare(read_file(docs_dir / (r.document_id + ".txt")), r.document_id);
      validate_gold(g, doc);
      pred_tokens[r.document_id] = token_labels(doc, report_spans(r));
      gold_tokens[r.document_id] = token_labels(doc, g.entities);
      pred_spans[r.document_id] = report_spans(r);
      gold_spans[r.document_id] = g.entities;
      pred_ratings[r.document_id] = r.rating.value;
      gold_ratings[r.document_id] = g.rating;
    }
    const MetricReport entities = options.span_mode ? evaluate_entity_spans(pred_spans, gold_spans)
                                                    : evaluate_entities(pred_tokens, gold_tokens);
    const MetricReport ratings = evaluate_ratings(pred_ratings, gold_ratings);
    const fs::path out_dir = options.out_dir.value_or(config.paths.metrics_dir);
    write_file(out_dir / "entity_metrics.csv", report_to_csv(entities));
    write_file(out_dir / "entity_metrics.json", report_to_json(entities));
    write_file(out_dir / "rating_metrics.csv", report_to_csv(ratings));
    write_file(out_dir / "rating_metrics.json", report_to_json(ratings));
    const auto agreement = annotator_agreement(records);
    if (!agreement.empty()) write_file(out_dir / "agreement.csv", agreement_to_csv(agreement));

    io.out << entities.title << '\n' << report_to_csv(entities) << '\n';
    io.out << ratings.title << '\n' << report_to_csv(ratings);
    if (!agreement.empty()) io.out << "\nAnnotator agreement\n" << agreement_to_csv(agreement);
    if (skipped > 0) io.err << "warning: skipped " << skipped << " reports with errors\n";
    return kExitOk;
  });
}

}  // namespace piperate
