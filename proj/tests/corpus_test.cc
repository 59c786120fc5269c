// Copyright 2026 The segcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


// tests/corpus_test.cc

#include <fstream>
#include <numeric>

#include "doctest.h"
#include "segcorr/corpus.h"
#include "segcorr/errors.h"
#include "segcorr/rng.h"
#include "segcorr/subword.h"
#include "test_util.h"

using namespace segcorr;

namespace {

TokenizedDocument ParseText(const std::string &text) {
  return ParseSubtitles(SubtitleDocument{"d", {text}});
}

}  // namespace

TEST_CASE("parse: question mark closes a sentence mid-line") {
  auto doc = ParseText("Are you okay Agent Scully? You kind of sounded a little spooky.");
  std::vector<std::string> tokens = {"are",  "you", "okay",    "agent", "scully", "you",
                                     "kind", "of",  "sounded", "a",     "little", "spooky"};
  CHECK(doc.tokens == tokens);
  CHECK(doc.labels == Tags{0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("parse: stripped marks label the preceding token") {
  auto doc = ParseText("Yeah. The holiday market is too busy. Yes.");
  CHECK(doc.tokens ==
        std::vector<std::string>{"yeah", "the", "holiday", "market", "is", "too", "busy", "yes"});
  CHECK(doc.labels == Tags{1, 0, 0, 0, 0, 0, 1, 1});
}

TEST_CASE("parse: empty and punctuation-only input") {
  auto empty = ParseText("");
  CHECK(empty.tokens.empty());
  CHECK(empty.labels.empty());
  auto marks = ParseText("... !? -");
  CHECK(marks.tokens.empty());
}

TEST_CASE("parse: leading mark has no preceding token") {
  auto doc = ParseText("- Hello there");
  CHECK(doc.tokens == std::vector<std::string>{"hello", "there"});
  CHECK(doc.labels == Tags{0, 0});
}

TEST_CASE("parse: hyphen inside a word is kept") {
  auto doc = ParseText("A well-known fact - really");
  CHECK(doc.tokens == std::vector<std::string>{"a", "well-known", "fact", "really"});
  CHECK(doc.labels == Tags{0, 0, 1, 0});
}

TEST_CASE("parse: lines do not reset labels and unlisted marks stay") {
  auto doc = ParseSubtitles(SubtitleDocument{"d", {"Hi, there", "you!"}});
  CHECK(doc.tokens == std::vector<std::string>{"hi,", "there", "you"});
  CHECK(doc.labels == Tags{0, 0, 1});
}

TEST_CASE("parse: custom punctuation set") {
  auto doc = ParseSubtitles(SubtitleDocument{"d", {"one, two. three"}}, {","});
  CHECK(doc.tokens == std::vector<std::string>{"one", "two.", "three"});
  CHECK(doc.labels == Tags{1, 0, 0});
}

TEST_CASE("parse: lowercases non-ASCII letters") {
  auto doc = ParseText("ÉCOLE Ñandú");
  CHECK(doc.tokens == std::vector<std::string>{"école", "ñandú"});
}

TEST_CASE("chunk: short document yields one instance") {
  CorpusPrepConfig cfg;
  cfg.min_len = 5;
  cfg.max_len = 10;
  Rng rng(1);
  std::vector<std::string> tokens = {"a", "b", "c", "d", "e"};
  auto out = ChunkDocument("d", tokens, Tags{0, 0, 1, 0, 1}, cfg, rng);
  REQUIRE(out.size() == 1);
  CHECK(out[0].tokens == tokens);
  CHECK(out[0].labels == Tags{0, 0, 1, 0, 1});
  CHECK(out[0].index == 0);
}

TEST_CASE("chunk: empty document yields nothing") {
  CorpusPrepConfig cfg;
  Rng rng(1);
  CHECK(ChunkDocument("d", {}, {}, cfg, rng).empty());
}

TEST_CASE("chunk: lengths are reproducible and sum to the document length") {
  CorpusPrepConfig cfg;
  std::vector<std::string> tokens(250, "w");
  Tags labels(250, 0);
  auto lengths = [&](uint64_t seed) {
    Rng rng(seed);
    std::vector<size_t> out;
    for (const auto &inst : ChunkDocument("d", tokens, labels, cfg, rng))
      out.push_back(inst.size());
    return out;
  };
  auto a = lengths(42), b = lengths(42);
  CHECK(a == b);
  CHECK(std::accumulate(a.begin(), a.end(), size_t{0}) == 250);
  for (size_t i = 0; i + 1 < a.size(); ++i) {
    CHECK(a[i] >= 1);
    CHECK(a[i] <= 100);
  }
}

TEST_CASE("chunk: length mismatch is rejected") {
  CorpusPrepConfig cfg;
  Rng rng(1);
  CHECK_THROWS_AS(ChunkDocument("d", {"a", "b"}, Tags{0}, cfg, rng), DataError);
}

TEST_CASE("split: 10 instances at 0.9 gives 9 and 1, deterministically") {
  std::vector<Instance> instances;
  for (int i = 0; i < 10; ++i) instances.push_back(Instance{"d", i, {"x"}, {}, {1}});
  CorpusPrepConfig cfg;
  cfg.seed = 5;
  auto [train, valid] = SplitTrainValid(instances, cfg);
  CHECK(train.size() == 9);
  CHECK(valid.size() == 1);
  auto [train2, valid2] = SplitTrainValid(instances, cfg);
  CHECK(train == train2);
  CHECK(valid == valid2);
  std::set<int64_t> seen;
  for (const auto &i : train) seen.insert(i.index);
  for (const auto &i : valid) seen.insert(i.index);
  CHECK(seen.size() == 10);
}

TEST_CASE("split: fewer than two instances is an error") {
  CorpusPrepConfig cfg;
  CHECK_THROWS_AS(SplitTrainValid({Instance{"d", 0, {"x"}, {}, {1}}}, cfg), DataError);
}

TEST_CASE("split: both sides stay non-empty for extreme fractions") {
  std::vector<Instance> instances(3, Instance{"d", 0, {"x"}, {}, {1}});
  CorpusPrepConfig cfg;
  cfg.train_fraction = 0.99;
  auto [train, valid] = SplitTrainValid(instances, cfg);
  CHECK(train.size() == 2);
  CHECK(valid.size() == 1);
}

TEST_CASE("config validation") {
  CorpusPrepConfig cfg;
  cfg.min_len = 0;
  CHECK_THROWS_AS(cfg.Validate(), std::invalid_argument);
  cfg = CorpusPrepConfig{};
  cfg.train_fraction = 1.0;
  CHECK_THROWS_AS(cfg.Validate(), std::invalid_argument);
  cfg = CorpusPrepConfig{};
  cfg.min_len = 10;
  cfg.max_len = 5;
  CHECK_THROWS_AS(cfg.Validate(), std::invalid_argument);
}

TEST_CASE("down-sample keeps input order and the requested count") {
  std::vector<SubtitleDocument> docs;
  for (int i = 0; i < 20; ++i) docs.push_back({"d" + std::to_string(100 + i), {}});
  Rng rng(3);
  auto kept = DownSample(docs, 7, rng);
  REQUIRE(kept.size() == 7);
  for (size_t i = 0; i + 1 < kept.size(); ++i) CHECK(kept[i].doc_id < kept[i + 1].doc_id);
  Rng rng2(3);
  CHECK(DownSample(docs, 50, rng2).size() == 20);
}

TEST_CASE("instances round-trip through JSON lines") {
  Instance with_gamma{"doc \"1\"", 3, {"héllo", "@@x"}, {0, 1}, {1, 1}};
  Instance without{"d", 0, {"a"}, {}, {1}};
  CHECK(InstanceFromJsonLine(InstanceToJsonLine(with_gamma)) == with_gamma);
  CHECK(InstanceFromJsonLine(InstanceToJsonLine(without)) == without);
  CHECK(InstanceToJsonLine(without).find("gamma") == std::string::npos);

  auto dir = testing::ScratchDir("instances");
  WriteInstances(dir / "x.jsonl", {with_gamma, without});
  auto back = ReadInstances(dir / "x.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0] == with_gamma);
  CHECK(back[1] == without);
}

TEST_CASE("malformed instances are data errors") {
  CHECK_THROWS_AS(InstanceFromJsonLine("{not json"), DataError);
  CHECK_THROWS_AS(InstanceFromJsonLine(R"({"doc_id":"d","index":0,"tokens":["a"],"labels":[2]})"),
                  DataError);
  CHECK_THROWS_AS(
      InstanceFromJsonLine(R"({"doc_id":"d","index":0,"tokens":["a","b"],"labels":[1]})"),
      DataError);
  CHECK_THROWS_AS(InstanceFromJsonLine(
                      R"({"doc_id":"d","index":0,"tokens":["a"],"gamma":[0,1],"labels":[1]})"),
                  DataError);
}

TEST_CASE("subtitle directory reading is sorted by file name") {
  auto dir = testing::ScratchDir("subs");
  std::ofstream(dir / "b.srt.txt") << "Second file.\n";
  std::ofstream(dir / "a.txt") << "First.\nLine two\n";
  auto docs = ReadSubtitleDir(dir);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].doc_id == "a");
  CHECK(docs[0].lines == std::vector<std::string>{"First.", "Line two"});
  CHECK(docs[1].doc_id == "b.srt");
  CHECK_THROWS_AS(ReadSubtitleDir(dir / "missing"), DataError);
}
