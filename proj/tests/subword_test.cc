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


// tests/subword_test.cc

#include <fstream>

#include "doctest.h"
#include "segcorr/errors.h"
#include "segcorr/subword.h"
#include "test_util.h"

using namespace segcorr;

TEST_CASE("bpe: zero merges splits words into characters") {
  auto sw = SubwordModel::Train(std::map<std::string, int64_t>{{"cat", 2}, {"at", 1}}, 0);
  CHECK(sw.merges().empty());
  CHECK(sw.alphabet() == std::set<std::string>{"a", "c", "t"});
  CHECK(sw.Encode("cat") == std::vector<std::string>{"c@@", "a@@", "t"});
  CHECK(sw.Encode("a") == std::vector<std::string>{"a"});
}

TEST_CASE("bpe: the most frequent pair is merged first") {
  auto sw = SubwordModel::Train({SubtitleDocument{"d", {"abab abab"}}}, 1);
  REQUIRE(sw.merges().size() == 1);
  CHECK(sw.merges()[0] == SubwordModel::Merge{"a", "b"});
  CHECK(sw.Encode("abab") == std::vector<std::string>{"ab@@", "ab"});
}

TEST_CASE("bpe: merges apply in learned order") {
  auto sw = SubwordModel::Train(
      std::map<std::string, int64_t>{{"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}},
      10);
  REQUIRE(sw.merges().size() >= 3);
  // e-s and s-t both occur 9 times; ties go to the smaller pair.
  CHECK(sw.merges()[0] == SubwordModel::Merge{"e", "s"});
  CHECK(sw.merges()[1] == SubwordModel::Merge{"es", "t"});
  for (const std::string w : {"low", "lower", "newest", "widest", "lowest"})
    CHECK(SubwordModel::Decode(sw.Encode(w)) == std::vector<std::string>{w});
}

TEST_CASE("bpe: learning stops when no pair repeats") {
  auto sw = SubwordModel::Train(std::map<std::string, int64_t>{{"xyz", 1}}, 100);
  CHECK(sw.merges().empty());
}

TEST_CASE("bpe: empty corpus is an error") {
  CHECK_THROWS_WITH_AS(SubwordModel::Train(std::vector<SubtitleDocument>{}, 10), "empty corpus",
                       DataError);
  CHECK_THROWS_AS(SubwordModel::Train({SubtitleDocument{"d", {"  ...  "}}}, 10), DataError);
}

TEST_CASE("bpe: unknown characters map to the unknown piece") {
  auto sw = SubwordModel::Train(std::map<std::string, int64_t>{{"abc", 3}}, 5);
  CHECK(sw.Encode("abz") == std::vector<std::string>{SubwordModel::kUnknown});
}

TEST_CASE("bpe: multi-byte characters are atomic") {
  auto sw = SubwordModel::Train(std::map<std::string, int64_t>{{"żółw", 4}, {"żół", 2}}, 2);
  for (const auto &p : sw.Encode("żółw"))
    CHECK((static_cast<unsigned char>(p[0]) & 0xC0) != 0x80);  // no split code point
  CHECK(SubwordModel::Decode(sw.Encode("żółw")) == std::vector<std::string>{"żółw"});
}

TEST_CASE("bpe: save and load preserve encoding") {
  auto sw = SubwordModel::Train({SubtitleDocument{"d", {"the market is busy the busy market"}}},
                                8);
  auto dir = testing::ScratchDir("bpe");
  sw.Save(dir / "sw.txt");
  auto back = SubwordModel::Load(dir / "sw.txt");
  CHECK(back.merges() == sw.merges());
  CHECK(back.alphabet() == sw.alphabet());
  for (const std::string w : {"market", "busy", "mask", "q"}) CHECK(back.Encode(w) == sw.Encode(w));
  CHECK(back.Vocabulary() == sw.Vocabulary());
}

TEST_CASE("bpe: malformed model file") {
  auto dir = testing::ScratchDir("bpe_bad");
  std::ofstream(dir / "bad.txt") << "#merges 2\na b\n";
  CHECK_THROWS_AS(SubwordModel::Load(dir / "bad.txt"), DataError);
  CHECK_THROWS_AS(SubwordModel::Load(dir / "absent.txt"), DataError);
}

TEST_CASE("projection: label goes to the last piece of each word") {
  auto sw = SubwordModel::Train(std::map<std::string, int64_t>{{"mar", 3}, {"ket", 3}}, 4);
  REQUIRE(sw.Encode("market") == std::vector<std::string>{"mar@@", "ket"});
  Instance inst{"d", 0, {"the", "market"}, {1, 1}, {0, 1}};
  // "the" has unknown characters, so it becomes one piece.
  Instance enc = EncodeInstance(inst, sw);
  CHECK(enc.tokens == std::vector<std::string>{SubwordModel::kUnknown, "mar@@", "ket"});
  CHECK(enc.labels == Tags{0, 0, 1});
  CHECK(enc.gamma == Tags{1, 0, 1});
  CHECK(enc.doc_id == "d");

  Instance zeros{"d", 0, {"market", "market"}, {}, {0, 0}};
  CHECK(EncodeInstance(zeros, sw).labels == Tags{0, 0, 0, 0});
}

TEST_CASE("projection back to words reads the last piece") {
  auto sw = SubwordModel::Train(std::map<std::string, int64_t>{{"mar", 3}, {"ket", 3}}, 4);
  auto seq = EncodeWords({"market", "mar"}, sw);
  CHECK(seq.word_of == std::vector<size_t>{0, 0, 1});
  CHECK(ProjectToWords(seq, Tags{1, 0, 1}, 2) == Tags{0, 1});
  CHECK(ProjectToWords(seq, Tags{0, 1, 0}, 2) == Tags{1, 0});
}
