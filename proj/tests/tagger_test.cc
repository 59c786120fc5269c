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


// tests/tagger_test.cc

#include <cmath>
#include <fstream>

#include "doctest.h"
#include "segcorr/errors.h"
#include "segcorr/tagger.h"
#include "test_util.h"

using namespace segcorr;

namespace {

ModelConfig TinyConfig() {
  ModelConfig cfg;
  cfg.token_embed_dim = 4;
  cfg.flag_embed_dim = 2;
  cfg.hidden_units = 3;
  cfg.layers = 2;
  cfg.seed = 17;
  return cfg;
}

Vocabulary ToyVocab() {
  Vocabulary v;
  for (const char *t : {"a", "b", "c", "stop"}) v.Add(t);
  return v;
}

void ZeroProjection(TaggerModel &model) {
  for (const char *name : {"proj.w", "proj.b"}) {
    const auto &b = model.block(name);
    model.mutable_params().segment(b.offset, b.size()).setZero();
  }
}

}  // namespace

TEST_CASE("default embedding width is token plus flag") {
  ModelConfig cfg;
  cfg.hidden_units = 2;
  cfg.layers = 1;
  TaggerModel model(cfg, ToyVocab());
  CHECK(model.Embed(1, 0).size() == 316);
  cfg.use_gamma_input = false;
  TaggerModel lexical(cfg, ToyVocab());
  CHECK(lexical.Embed(1, 1).size() == 300);
  CHECK(model.Embed(2, 1) == model.Embed(2, 1));
  CHECK(model.Embed(2, 1) != model.Embed(2, 0));
}

TEST_CASE("embed rejects out-of-range ids and flags") {
  TaggerModel model(TinyConfig(), ToyVocab());
  CHECK_THROWS_AS(model.Embed(99, 0), std::out_of_range);
  CHECK_THROWS_AS(model.Embed(-1, 0), std::out_of_range);
  CHECK_THROWS_AS(model.Embed(1, 2), std::out_of_range);
}

TEST_CASE("initial embeddings lie in [-0.1, 0.1]") {
  TaggerModel model(TinyConfig(), ToyVocab());
  const auto &g = model.block("token_embed");
  auto seg = model.params().segment(g.offset, g.size());
  CHECK(seg.maxCoeff() <= 0.1);
  CHECK(seg.minCoeff() >= -0.1);
  CHECK(g.rows == 4);
  CHECK(g.cols == 5);
}

TEST_CASE("forward gives one probability per token in (0,1)") {
  TaggerModel model(TinyConfig(), ToyVocab());
  std::vector<std::string> tokens = {"a", "b", "zzz", "stop", "c", "a", "b", "stop"};
  auto p = model.Forward(tokens, Tags(8, 0));
  REQUIRE(p.size() == 8);
  for (double x : p) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  CHECK_THROWS_AS(model.Forward(std::vector<std::string>{}, Tags{}), std::invalid_argument);
  CHECK_THROWS_AS(model.Forward(tokens, Tags(3, 0)), std::invalid_argument);
}

TEST_CASE("zero projection gives probability one half") {
  TaggerModel model(TinyConfig(), ToyVocab());
  ZeroProjection(model);
  for (double p : model.Forward(std::vector<std::string>{"a", "stop", "c"}, Tags{0, 1, 1}))
    CHECK(p == 0.5);
}

TEST_CASE("loss at probability one half is n ln 2") {
  TaggerModel model(TinyConfig(), ToyVocab());
  ZeroProjection(model);
  Example ex{{1, 2, 3, 4, 1}, {0, 0, 1, 0, 1}, {1, 0, 0, 1, 1}};
  CHECK(model.Loss({ex}) == doctest::Approx(5 * std::log(2.0)).epsilon(1e-12));
  Example ex2{{1, 2}, {0, 1}, {0, 0}};
  // Batch loss is the mean of per-instance sums.
  CHECK(model.Loss({ex, ex2}) == doctest::Approx(3.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("confident correct predictions give near-zero loss") {
  TaggerModel model(TinyConfig(), ToyVocab());
  ZeroProjection(model);
  const auto &b = model.block("proj.b");
  model.mutable_params()[b.offset] = 40.0;  // sigmoid(40) ~ 1
  Example ones{{1, 2, 3}, {0, 0, 0}, {1, 1, 1}};
  CHECK(model.Loss({ones}) < 1e-5 * 3);
}

TEST_CASE("threshold") {
  CHECK(Threshold({0.9, 0.1, 0.6}, 0.5) == Tags{1, 0, 1});
  CHECK(Threshold({0.9, 0.1, 0.6}, 1.0 - 1e-12) == Tags{0, 0, 0});
  CHECK(Threshold({}, 0.5).empty());
}

TEST_CASE("vocabulary") {
  std::vector<Instance> insts = {{"d", 0, {"b", "a", "b"}, {}, {0, 0, 1}}};
  auto v = Vocabulary::FromInstances(insts);
  CHECK(v.tokens() == std::vector<std::string>{"<unk>", "a", "b"});
  CHECK(v.Id("b") == 2);
  CHECK(v.Id("never") == Vocabulary::kUnknownId);
}

TEST_CASE("config key=value round-trip and validation") {
  ModelConfig cfg = TinyConfig();
  cfg.learning_rate = 0.0123;
  cfg.freeze_embeddings = true;
  ModelConfig back;
  back.Update(cfg.ToKeyValues());
  CHECK(back.ToKeyValues() == cfg.ToKeyValues());
  CHECK_THROWS_AS(back.Update({{"hidden", "3"}}), std::invalid_argument);
  CHECK_THROWS_AS(back.Update({{"layers", "two"}}), std::invalid_argument);
  ModelConfig bad = TinyConfig();
  bad.decision_threshold = 1.0;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  bad = TinyConfig();
  bad.layers = 0;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
}

TEST_CASE("config file parsing") {
  auto dir = testing::ScratchDir("cfg");
  std::ofstream(dir / "m.cfg") << "# comment\nhidden_units = 7\n\nlayers=1\n";
  auto kv = ReadKeyValueFile(dir / "m.cfg");
  CHECK(kv.at("hidden_units") == "7");
  CHECK(kv.at("layers") == "1");
  std::ofstream(dir / "bad.cfg") << "hidden_units 7\n";
  CHECK_THROWS_AS(ReadKeyValueFile(dir / "bad.cfg"), DataError);
}

TEST_CASE("checkpoint round-trip is exact") {
  TaggerModel model(TinyConfig(), ToyVocab());
  auto dir = testing::ScratchDir("ckpt");
  model.Save(dir / "m.txt");
  auto back = TaggerModel::Load(dir / "m.txt");
  CHECK(back.params() == model.params());
  CHECK(back.vocab().tokens() == model.vocab().tokens());
  CHECK(back.config().ToKeyValues() == model.config().ToKeyValues());

  std::ofstream(dir / "junk.txt") << "hello\n";
  CHECK_THROWS_AS(TaggerModel::Load(dir / "junk.txt"), DataError);
}

TEST_CASE("pretrained vectors overwrite matching rows") {
  TaggerModel model(TinyConfig(), ToyVocab());
  auto dir = testing::ScratchDir("vec");
  std::ofstream(dir / "v.txt") << "3 4\na 1 2 3 4\nnothere 0 0 0 0\nstop 5 6 7 8\n";
  CHECK(model.LoadPretrainedEmbeddings(dir / "v.txt") == 2);
  const auto &g = model.block("token_embed");
  Eigen::Map<const Eigen::MatrixXd> table(model.params().data() + g.offset, g.rows, g.cols);
  CHECK(table(0, model.vocab().Id("a")) == 1.0);
  CHECK(table(3, model.vocab().Id("stop")) == 8.0);
  std::ofstream(dir / "w.txt") << "a 1 2\n";
  CHECK_THROWS_AS(model.LoadPretrainedEmbeddings(dir / "w.txt"), DataError);
}

TEST_CASE("training is deterministic and zero epochs is the identity") {
  auto train = testing::StopGrammarCorpus(1, 20, 3, 8);
  auto valid = testing::StopGrammarCorpus(2, 5, 3, 8);
  ModelConfig cfg = TinyConfig();
  cfg.max_epochs = 2;
  cfg.batch_size = 4;
  auto a = Train(train, valid, cfg);
  auto b = Train(train, valid, cfg);
  CHECK(a.best_valid_loss == b.best_valid_loss);
  CHECK(a.model.params() == b.model.params());
  CHECK(a.history.size() == 3);
  CHECK(std::isnan(a.history[0].train_loss));

  ModelConfig zero = cfg;
  zero.max_epochs = 0;
  auto same = FineTune(a.model, train, valid, zero);
  CHECK(same.model.params() == a.model.params());
}

TEST_CASE("frozen embeddings do not move during fine-tuning") {
  auto train = testing::StopGrammarCorpus(3, 10, 3, 6);
  auto valid = testing::StopGrammarCorpus(4, 4, 3, 6);
  ModelConfig cfg = TinyConfig();
  cfg.max_epochs = 1;
  auto base = Train(train, valid, cfg).model;
  ModelConfig ft = cfg;
  ft.freeze_embeddings = true;
  ft.max_epochs = 2;
  ft.learning_rate = 0.05;
  auto tuned = FineTune(base, train, valid, ft);
  const auto &g = base.block("token_embed");
  CHECK(tuned.model.params().segment(g.offset, g.size()) ==
        base.params().segment(g.offset, g.size()));
  if (tuned.best_epoch > 0) CHECK(tuned.model.params() != base.params());
}

TEST_CASE("empty training data is a data error") {
  auto valid = testing::StopGrammarCorpus(4, 4, 3, 6);
  CHECK_THROWS_AS(Train({}, valid, TinyConfig()), DataError);
}
