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

#include "piperate/corpus.h"

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "piperate/random.h"
#include "test_util.h"

namespace piperate {
namespace {

using testing::error_code_of;

TEST_CASE("single header gives one named section") {
  const Document doc = parse_document("Defects: Frequent leaks at joint.", "d1");
  REQUIRE(doc.sections.size() == 1);
  CHECK(doc.sections[0].name == "Defects");
  CHECK(doc.sections[0].body == " Frequent leaks at joint.");
}

TEST_CASE("text without headers is unsectioned") {
  const Document doc = parse_document("Leaks near the midpoint.\nMore text.\n", "d2");
  REQUIRE(doc.sections.size() == 1);
  CHECK(doc.sections[0].name == kUnsectioned);
  CHECK(doc.sections[0].body == doc.raw);
}

TEST_CASE("two headers split the body at the second header line") {
  const std::string raw = "Pipe Characteristics:\nClay pipe, 8 inch.\nsummary: Leaks found.\n";
  const Document doc = parse_document(raw, "d3");
  REQUIRE(doc.sections.size() == 2);
  // Header positions found by plain substring search.
  const std::size_t second = raw.find("summary:");
  const std::size_t first_body = raw.find(':') + 1;
  CHECK(doc.sections[0].name == "Pipe Characteristics");
  CHECK(doc.sections[0].body == raw.substr(first_body, second - first_body));
  CHECK(doc.sections[1].name == "Summary");
  CHECK(doc.sections[1].offset == second + std::string("summary:").size());
  CHECK(doc.sections[1].body == " Leaks found.\n");
}

TEST_CASE("unknown headers stay in the surrounding section") {
  const Document doc = parse_document("Notes: something\nDefects: leaks\n", "d4");
  REQUIRE(doc.sections.size() == 2);
  CHECK(doc.sections[0].name == kUnsectioned);
  CHECK(doc.sections[0].body == "Notes: something\n");
}

TEST_CASE("reassembly reproduces the input") {
  const std::string raw = "Intro line\nDefects:\n  Leaks.\nCapacity: full\n\nSummary:ok";
  CHECK(reassemble(parse_document(raw, "x")) == raw);
}

TEST_CASE("empty document is rejected") {
  CHECK(error_code_of([] { parse_document("", "e"); }) == ErrorCode::kEmptyDocument);
}

TEST_CASE("gold record parsing") {
  const auto recs = parse_gold("d1\t5\tDefect:3-8\tann1\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].rating == 5);
  REQUIRE(recs[0].entities.size() == 1);
  CHECK(recs[0].entities[0] == GoldEntity{EntityType::kDefect, {3, 8}});
  CHECK(recs[0].annotator_id == "ann1");

  CHECK(error_code_of([] { parse_gold("d1\t0\t-\ta\n"); }) == ErrorCode::kInvalidRating);
  CHECK(error_code_of([] { parse_gold("d1\t6\t-\ta\n"); }) == ErrorCode::kInvalidRating);
  CHECK(error_code_of([] { parse_gold("d1\t3\tDefect:8-3\ta\n"); }) == ErrorCode::kInvalidSpan);
  CHECK(error_code_of([] { parse_gold("d1\t3\tDefect:x-3\ta\n"); }) == ErrorCode::kInvalidSpan);
  CHECK(error_code_of([] { parse_gold("d1\t3\tColor:1-3\ta\n"); }) == ErrorCode::kInvalidSpan);
  CHECK(error_code_of([] { parse_gold("d1\t3\t-\ta\nd1\t4\t-\ta\n"); }) == ErrorCode::kDuplicateRecord);
  CHECK(error_code_of([] { parse_gold("d1\t3\t-\n"); }) == ErrorCode::kGoldFormatError);
  // A second annotator for the same document is fine.
  CHECK(parse_gold("d1\t3\t-\ta\nd1\t4\t-\tb\n").size() == 2);
}

TEST_CASE("500-record gold file round trips") {
  std::vector<GoldRecord> records;
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    GoldRecord r;
    r.document_id = "doc" + std::to_string(i);
    r.rating = 1 + static_cast<int>(rng.below(5));
    r.annotator_id = "a";
    for (std::uint64_t k = rng.below(4); k > 0; --k) {
      const std::size_t b = rng.below(100);
      r.entities.push_back({kEntityTypes[rng.below(4)], {b, b + 1 + rng.below(10)}});
    }
    records.push_back(r);
  }
  const std::string text = format_gold(records);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  const auto parsed = parse_gold(text);
  CHECK(parsed.size() == lines);
  CHECK(parsed == records);
}

TEST_CASE("gold spans are validated against the document") {
  const Document doc = parse_document("Leaks.", "d");
  GoldRecord ok{"d", 2, {{EntityType::kDefect, {0, 5}}}, "a"};
  CHECK_NOTHROW(validate_gold(ok, doc));
  GoldRecord bad{"d", 2, {{EntityType::kDefect, {0, 50}}}, "a"};
  CHECK(error_code_of([&] { validate_gold(bad, doc); }) == ErrorCode::kInvalidSpan);
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("doc" + std::to_string(1000 + i));
  return out;
}

TEST_CASE("500 documents split 400/100") {
  const auto s = split_corpus(ids(500), 0.8, 42);
  CHECK(s.train.size() == 400);
  CHECK(s.test.size() == 100);
}

TEST_CASE("split is deterministic and seed dependent") {
  CHECK(split_corpus(ids(10), 0.8, 3).train == split_corpus(ids(10), 0.8, 3).train);
  const auto a = split_corpus(ids(10), 0.8, 1);
  const auto b = split_corpus(ids(10), 0.8, 2);
  CHECK(std::set<std::string>(a.test.begin(), a.test.end()) != std::set<std::string>(b.test.begin(), b.test.end()));
}

TEST_CASE("split partitions the ids for many seeds") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 37;
    const auto all = ids(n);
    const auto s = split_corpus(all, 0.8, seed);
    std::set<std::string> train(s.train.begin(), s.train.end());
    std::set<std::string> test(s.test.begin(), s.test.end());
    std::set<std::string> both = train;
    both.insert(test.begin(), test.end());
    CHECK(both == std::set<std::string>(all.begin(), all.end()));
    CHECK(both.size() == train.size() + test.size());
    const double exact = 0.8 * static_cast<double>(n);
    CHECK(std::abs(static_cast<double>(train.size()) - exact) <= 1.0);
  }
}

TEST_CASE("split rejects tiny corpora and bad ratios") {
  CHECK(error_code_of([] { split_corpus(ids(1), 0.8, 0); }) == ErrorCode::kCorpusTooSmall);
  CHECK(error_code_of([] { split_corpus({"a", "a"}, 0.8, 0); }) == ErrorCode::kCorpusTooSmall);
  CHECK(error_code_of([] { split_corpus(ids(5), 1.0, 0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("split file round trip") {
  const auto s = split_corpus(ids(20), 0.8, 9);
  const auto back = parse_split(format_split(s));
  CHECK(back.train == s.train);
  CHECK(back.test == s.test);
  CHECK(back.seed == 9);
}

TEST_CASE("filter hook keeps matching documents") {
  std::vector<Document> docs = {parse_document("a", "1"), parse_document("Defects: b", "2")};
  const auto kept = filter_documents(docs, [](const Document& d) { return d.section("Defects") != nullptr; });
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == "2");
  CHECK(filter_documents(docs, {}).size() == 2);
}

TEST_CASE("documents load sorted from a directory") {
  testing::ScratchDir dir("corpus");
  write_file(dir / "b.txt", "second");
  write_file(dir / "a.txt", "first");
  write_file(dir / "skip.md", "ignored");
  const auto docs = load_documents(dir.path());
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a");
  CHECK(docs[1].raw == "second");
}

}  // namespace
}  // namespace piperate
