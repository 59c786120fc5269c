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


// tools/segtool.cc

// Command-line front end: prep -> synth -> train -> finetune -> correct ->
// eval-seg / eval-retrieval / ari-report.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "segcorr/corpus.h"
#include "segcorr/errors.h"
#include "segcorr/evaluation.h"
#include "segcorr/noise.h"
#include "segcorr/parallel.h"
#include "segcorr/resegment.h"
#include "segcorr/subword.h"
#include "segcorr/tagger.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace segcorr;

namespace {

constexpr const char *kToolVersion = "segtool 1.0.0";
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Records what a command was asked to do. Written before any output
/// artifact and free of timestamps, so identical runs give identical files.
struct RunManifest {
  std::string command;
  uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  void Write(const fs::path &path) const {
    ordered_json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["seed"] = seed;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
  }
};

fs::path ManifestPathFor(const fs::path &output) {
  return fs::path(output.string() + ".manifest.json");
}

uint64_t DefaultSeed() {
  if (const char *env = std::getenv("SEGTOOL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
      throw UsageError(std::string("SEGTOOL_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

std::string Num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

void Emit(const std::string &output, const std::string &text) {
  if (output.empty() || output == "-")
    std::cout << text;
  else
    WriteText(output, text);
}

// ---------------------------------------------------------------------------
// prep

struct PrepArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string subwords;
  int merges = SubwordModel::kDefaultMergeCount;
  bool word_level = false;
  CorpusPrepConfig cfg;
  int jobs = 1;
};

int RunPrep(const PrepArgs &a) {
  a.cfg.Validate();
  std::vector<SubtitleDocument> docs;
  std::set<std::string> ids;
  for (const auto &dir : a.inputs) {
    for (auto &doc : ReadSubtitleDir(dir)) {
      if (!ids.insert(doc.doc_id).second)
        throw DataError("duplicate doc_id '" + doc.doc_id + "' across inputs");
      docs.push_back(std::move(doc));
    }
  }
  if (docs.empty()) throw DataError("no subtitle documents found in the input directories");

  fs::create_directories(a.out_dir);
  const fs::path out(a.out_dir);
  RunManifest manifest;
  manifest.command = "prep";
  manifest.seed = a.cfg.seed;
  manifest.config = {{"min_len", std::to_string(a.cfg.min_len)},
                     {"max_len", std::to_string(a.cfg.max_len)},
                     {"train_fraction", Num(a.cfg.train_fraction)},
                     {"max_documents", std::to_string(a.cfg.max_documents)},
                     {"merges", std::to_string(a.merges)},
                     {"word_level", a.word_level ? "true" : "false"},
                     {"subwords", a.subwords}};
  manifest.inputs = a.inputs;
  manifest.outputs = {(out / "train.jsonl").string(), (out / "valid.jsonl").string(),
                      (out / "summary.json").string()};
  if (!a.word_level && a.subwords.empty())
    manifest.outputs.push_back((out / "subwords.txt").string());
  manifest.Write(out / "manifest.json");

  Rng sampler(DeriveSeed(a.cfg.seed, "downsample"));
  docs = DownSample(std::move(docs), a.cfg.max_documents, sampler);

  std::vector<TokenizedDocument> parsed(docs.size());
  ParallelFor(docs.size(), a.jobs, [&](size_t i) { parsed[i] = ParseSubtitles(docs[i]); });

  std::optional<SubwordModel> sw;
  if (!a.word_level) {
    if (!a.subwords.empty()) {
      sw = SubwordModel::Load(a.subwords);
    } else {
      std::map<std::string, int64_t> counts;
      for (const auto &p : parsed)
        for (const auto &t : p.tokens) ++counts[t];
      if (counts.empty()) throw DataError("empty corpus");
      sw = SubwordModel::Train(counts, a.merges);
      sw->Save(out / "subwords.txt");
    }
  }

  std::vector<std::vector<Instance>> per_doc(docs.size());
  ParallelFor(docs.size(), a.jobs, [&](size_t i) {
    Rng rng(DeriveSeed(a.cfg.seed, "chunk:" + docs[i].doc_id));
    per_doc[i] = ChunkDocument(docs[i].doc_id, parsed[i].tokens, parsed[i].labels, a.cfg, rng);
    if (sw)
      for (auto &inst : per_doc[i]) inst = EncodeInstance(inst, *sw);
  });
  std::vector<Instance> instances;
  for (auto &v : per_doc)
    for (auto &inst : v) instances.push_back(std::move(inst));

  int64_t segments = 0;
  for (const auto &inst : instances)
    for (int y : inst.labels) segments += y;

  auto [train, valid] = SplitTrainValid(std::move(instances), a.cfg);
  WriteInstances(out / "train.jsonl", train);
  WriteInstances(out / "valid.jsonl", valid);

  size_t total = train.size() + valid.size();
  ordered_json summary;
  summary["documents"] = docs.size();
  summary["instances"] = total;
  summary["train_instances"] = train.size();
  summary["valid_instances"] = valid.size();
  summary["boundaries"] = segments;
  summary["avg_segments_per_instance"] =
      static_cast<double>(segments) / static_cast<double>(total);
  if (sw) summary["merges"] = sw->merges().size();
  WriteText(out / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string input, output;
  std::string mode = "both";
  NoiseParams noise;
};

int RunSynth(SynthArgs a) {
  a.noise.mode = ParseNoiseMode(a.mode);
  a.noise.Validate();
  RunManifest manifest;
  manifest.command = "synth";
  manifest.seed = a.noise.seed;
  manifest.config = {{"under_rate", Num(a.noise.under_rate)},
                     {"over_rate", Num(a.noise.over_rate)},
                     {"noise_mode", a.mode}};
  manifest.inputs = {a.input};
  manifest.outputs = {a.output};
  manifest.Write(ManifestPathFor(a.output));

  std::vector<Instance> instances = ReadInstances(a.input);
  SynthesizeCorpus(instances, a.noise);
  WriteInstances(a.output, instances);
  std::cerr << "synthesized gamma for " << instances.size() << " instances\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train / finetune

struct ModelFlags {
  std::string config_file;
  std::optional<int> token_embed_dim, flag_embed_dim, hidden_units, layers, batch_size,
      max_epochs, patience;
  std::optional<double> learning_rate, decision_threshold;
  bool no_gamma_input = false;
  bool freeze_embeddings = false;
  std::optional<uint64_t> seed;

  void Register(CLI::App *app, bool architecture) {
    app->add_option("--config", config_file, "Flat key=value model config file");
    if (architecture) {
      app->add_option("--token-embed-dim", token_embed_dim);
      app->add_option("--flag-embed-dim", flag_embed_dim);
      app->add_option("--hidden-units", hidden_units, "LSTM units per direction");
      app->add_option("--layers", layers);
      app->add_flag("--no-gamma-input", no_gamma_input,
                    "Lexical-only model: ignore the acoustic boundary input");
    }
    app->add_option("--learning-rate", learning_rate);
    app->add_option("--batch-size", batch_size);
    app->add_option("--max-epochs", max_epochs);
    app->add_option("--patience", patience);
    app->add_option("--decision-threshold", decision_threshold);
    app->add_flag("--freeze-embeddings", freeze_embeddings);
    app->add_option("--seed", seed);
  }

  ModelConfig Resolve(ModelConfig base) const {
    if (!config_file.empty()) {
      try {
        base.Update(ReadKeyValueFile(config_file));
      } catch (const std::invalid_argument &e) {
        throw UsageError(config_file + ": " + e.what());
      }
    }
    if (token_embed_dim) base.token_embed_dim = *token_embed_dim;
    if (flag_embed_dim) base.flag_embed_dim = *flag_embed_dim;
    if (hidden_units) base.hidden_units = *hidden_units;
    if (layers) base.layers = *layers;
    if (learning_rate) base.learning_rate = *learning_rate;
    if (batch_size) base.batch_size = *batch_size;
    if (max_epochs) base.max_epochs = *max_epochs;
    if (patience) base.patience = *patience;
    if (decision_threshold) base.decision_threshold = *decision_threshold;
    if (no_gamma_input) base.use_gamma_input = false;
    if (freeze_embeddings) base.freeze_embeddings = true;
    if (seed)
      base.seed = *seed;
    else if (std::getenv("SEGTOOL_SEED"))
      base.seed = DefaultSeed();
    try {
      base.Validate();
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
    return base;
  }
};

struct TrainArgs {
  std::string train, valid, out, model, pretrained;
  ModelFlags flags;
  bool resample_gamma = false;
  double under_rate = 0.25, over_rate = 0.25;
  std::string noise_mode = "both";
};

TrainOptions MakeOptions(const TrainArgs &a, uint64_t seed) {
  TrainOptions options;
  if (a.resample_gamma) {
    NoiseParams noise;
    noise.under_rate = a.under_rate;
    noise.over_rate = a.over_rate;
    noise.mode = ParseNoiseMode(a.noise_mode);
    noise.seed = seed;
    noise.Validate();
    options.resample_gamma = noise;
  }
  options.pretrained_embeddings = a.pretrained;
  options.on_epoch = [](const EpochRecord &r) {
    std::cerr << "epoch " << r.epoch << "  train_loss ";
    if (std::isnan(r.train_loss))
      std::cerr << '-';
    else
      std::cerr << r.train_loss;
    std::cerr << "  valid_loss " << r.valid_loss << '\n';
  };
  return options;
}

void LogResult(const TrainResult &result) {
  std::cerr << "best epoch " << result.best_epoch << "  valid_loss "
            << result.best_valid_loss << '\n';
}

int RunTrain(const TrainArgs &a) {
  ModelConfig cfg = a.flags.Resolve(ModelConfig{});
  RunManifest manifest;
  manifest.command = "train";
  manifest.seed = cfg.seed;
  manifest.config = cfg.ToKeyValues();
  manifest.config["resample_gamma"] = a.resample_gamma ? "true" : "false";
  manifest.config["pretrained_embeddings"] = a.pretrained;
  manifest.inputs = {a.train, a.valid};
  manifest.outputs = {a.out};
  manifest.Write(ManifestPathFor(a.out));

  auto train = ReadInstances(a.train);
  auto valid = ReadInstances(a.valid);
  TrainResult result = Train(train, valid, cfg, MakeOptions(a, cfg.seed));
  LogResult(result);
  result.model.Save(a.out);
  return 0;
}

int RunFinetune(const TrainArgs &a) {
  TaggerModel base = TaggerModel::Load(a.model);
  ModelConfig cfg = a.flags.Resolve(base.config());
  RunManifest manifest;
  manifest.command = "finetune";
  manifest.seed = cfg.seed;
  manifest.config = cfg.ToKeyValues();
  manifest.config["resample_gamma"] = a.resample_gamma ? "true" : "false";
  manifest.inputs = {a.model, a.train, a.valid};
  manifest.outputs = {a.out};
  manifest.Write(ManifestPathFor(a.out));

  auto train = ReadInstances(a.train);
  auto valid = ReadInstances(a.valid);
  TrainResult result = FineTune(base, train, valid, cfg, MakeOptions(a, cfg.seed));
  LogResult(result);
  result.model.Save(a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// correct

struct CorrectArgs {
  std::string model, subwords, input, output, format = "lines", stub;
  std::optional<double> threshold;
  bool acoustic = false;
  int jobs = 1;
};

std::string FormatTranscripts(const std::vector<SegmentedTranscript> &transcripts,
                              const std::string &format) {
  if (format != "concat") return EmitSegments(transcripts, format);
  std::string out;
  for (const auto &t : transcripts) out += t.doc_id + '\t' + ConcatDocument(t) + '\n';
  return out;
}

int RunCorrect(const CorrectArgs &a) {
  if (a.format != "lines" && a.format != "jsonl" && a.format != "concat")
    throw UsageError("unknown --format '" + a.format + "' (expected lines|jsonl|concat)");
  int sources = !a.model.empty() + !a.stub.empty() + a.acoustic;
  if (sources != 1) throw UsageError("give exactly one of --model, --stub, --acoustic");
  if (!a.stub.empty() && a.stub != "echo-gamma")
    throw UsageError("unknown --stub '" + a.stub + "' (expected echo-gamma)");

  std::optional<TaggerModel> model;
  if (!a.model.empty()) model = TaggerModel::Load(a.model);
  double threshold = a.threshold.value_or(model ? model->config().decision_threshold : 0.5);
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("--threshold must lie in (0, 1]");

  RunManifest manifest;
  manifest.command = "correct";
  manifest.config = {{"format", a.format},
                     {"threshold", Num(threshold)},
                     {"predictor", model ? "model" : (a.acoustic ? "acoustic" : a.stub)}};
  if (model) manifest.seed = model->config().seed;
  manifest.inputs = {a.input};
  if (!a.model.empty()) manifest.inputs.push_back(a.model);
  if (!a.subwords.empty()) manifest.inputs.push_back(a.subwords);
  if (!a.output.empty() && a.output != "-") {
    manifest.outputs = {a.output};
    manifest.Write(ManifestPathFor(a.output));
  }

  std::optional<SubwordModel> sw;
  if (!a.subwords.empty()) sw = SubwordModel::Load(a.subwords);
  std::vector<Utterance> utterances = ReadUtterances(a.input);

  std::vector<SegmentedTranscript> transcripts;
  if (a.acoustic) {
    transcripts = AcousticTranscripts(utterances);
  } else if (model) {
    TaggerPredictor predictor(*model, threshold);
    transcripts = CorrectAsr(utterances, predictor, sw ? &*sw : nullptr, a.jobs);
  } else {
    EchoGammaPredictor predictor;
    transcripts = CorrectAsr(utterances, predictor, sw ? &*sw : nullptr, a.jobs);
  }
  Emit(a.output, FormatTranscripts(transcripts, a.format));
  return 0;
}

// ---------------------------------------------------------------------------
// eval-seg

struct EvalSegArgs {
  std::string pred, gold, model, instances, output;
  std::optional<double> threshold;
};

ordered_json PrfJson(const Prf &p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

int RunEvalSeg(const EvalSegArgs &a) {
  ordered_json report;
  RunManifest manifest;
  manifest.command = "eval-seg";
  if (!a.instances.empty()) {
    if (a.model.empty()) throw UsageError("--instances needs --model");
    TaggerModel model = TaggerModel::Load(a.model);
    double threshold = a.threshold.value_or(model.config().decision_threshold);
    manifest.inputs = {a.model, a.instances};
    manifest.config = {{"threshold", Num(threshold)}};
    if (!a.output.empty() && a.output != "-") {
      manifest.outputs = {a.output};
      manifest.Write(ManifestPathFor(a.output));
    }
    BoundaryCounts model_counts, copy_counts;
    for (const auto &inst : ReadInstances(a.instances)) {
      Tags gamma = inst.has_gamma() ? inst.gamma : Tags(inst.size(), 0);
      model_counts.Add(model.Predict(inst.tokens, gamma, threshold), inst.labels);
      copy_counts.Add(gamma, inst.labels);
    }
    report["model"] = PrfJson(model_counts.Scores());
    report["copy_gamma"] = PrfJson(copy_counts.Scores());
  } else {
    if (a.pred.empty() || a.gold.empty())
      throw UsageError("eval-seg needs --pred and --gold, or --model and --instances");
    manifest.inputs = {a.pred, a.gold};
    if (!a.output.empty() && a.output != "-") {
      manifest.outputs = {a.output};
      manifest.Write(ManifestPathFor(a.output));
    }
    std::map<std::string, SegmentedTranscript> gold;
    for (auto &t : ReadTranscripts(a.gold)) gold[t.doc_id] = std::move(t);
    BoundaryCounts counts;
    for (const auto &t : ReadTranscripts(a.pred)) {
      auto it = gold.find(t.doc_id);
      if (it == gold.end()) throw DataError("no gold transcript for " + t.doc_id);
      Tags p = TranscriptTags(t), g = TranscriptTags(it->second);
      if (p.size() != g.size())
        throw DataError(t.doc_id + ": predicted and gold token counts differ");
      counts.Add(p, g);
    }
    report["boundaries"] = PrfJson(counts.Scores());
  }
  Emit(a.output, report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// eval-retrieval

struct EvalRetrievalArgs {
  std::string qrels, run, output;
  double beta = 40.0;
  double threshold = 0.0;
  std::optional<int64_t> collection_size;
  bool per_query_sweep = false;
  bool rank_sweep = false;
};

ordered_json ReportJson(const QwvReport &r) {
  ordered_json j;
  j["value"] = r.value;
  j["threshold"] = std::isfinite(r.threshold) ? ordered_json(r.threshold)
                                               : ordered_json(Num(r.threshold));
  return j;
}

int RunEvalRetrieval(const EvalRetrievalArgs &a) {
  QwvParams params{a.beta};
  try {
    params.Validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  RunManifest manifest;
  manifest.command = "eval-retrieval";
  manifest.config = {{"beta", Num(a.beta)}, {"threshold", Num(a.threshold)}};
  manifest.inputs = {a.qrels, a.run};
  if (!a.output.empty() && a.output != "-") {
    manifest.outputs = {a.output};
    manifest.Write(ManifestPathFor(a.output));
  }

  RelevanceJudgments judgments = ReadQrels(a.qrels);
  if (a.collection_size) judgments.collection_size = *a.collection_size;
  RetrievalRun run = ReadRun(a.run);
  QwvReport aqwv = AqwvAtThreshold(run, judgments, params, a.threshold);
  QwvReport mqwv = Mqwv(run, judgments, params);
  for (const auto &q : mqwv.skipped_queries)
    std::cerr << "warning: query " << q << " has no judgments; skipped\n";

  ordered_json report;
  report["aqwv_at_threshold"] = aqwv.value;
  report["mqwv"] = mqwv.value;
  report["per_query"] = ordered_json::object();
  for (const auto &[qid, v] : mqwv.per_query)
    report["per_query"][qid] = {{"qwv_at_threshold", aqwv.per_query.at(qid)},
                                {"qwv_at_optimum", v}};
  report["beta"] = a.beta;
  report["threshold"] = a.threshold;
  report["optimal_threshold"] = ReportJson(mqwv)["threshold"];
  report["collection_size"] = judgments.collection_size;
  if (a.per_query_sweep) report["mqwv_per_query_sweep"] = MqwvPerQuery(run, judgments, params).value;
  if (a.rank_sweep) report["mqwv_rank_sweep"] = ReportJson(MqwvRankSweep(run, judgments, params));
  Emit(a.output, report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// ari-report

struct AriArgs {
  std::string input, output;
};

int RunAriReport(const AriArgs &a) {
  RunManifest manifest;
  manifest.command = "ari-report";
  manifest.inputs = {a.input};
  if (!a.output.empty() && a.output != "-") {
    manifest.outputs = {a.output};
    manifest.Write(ManifestPathFor(a.output));
  }
  std::vector<ScoredId> scores;
  ordered_json report;
  report["documents"] = ordered_json::array();
  for (const auto &t : ReadTranscripts(a.input)) {
    double ari;
    try {
      ari = Ari(t);
    } catch (const std::invalid_argument &e) {
      throw DataError(t.doc_id + ": " + e.what());
    }
    scores.emplace_back(t.doc_id, ari);
    report["documents"].push_back({{"doc_id", t.doc_id}, {"ari", ari}});
  }
  if (scores.size() >= 4) {
    report["quartiles"] = ordered_json::array();
    for (const auto &bucket : QuartileSplit(scores)) {
      ordered_json ids = ordered_json::array();
      for (const auto &[id, _] : bucket) ids.push_back(id);
      report["quartiles"].push_back(ids);
    }
  } else {
    std::cerr << "note: fewer than 4 documents; no quartiles\n";
  }
  Emit(a.output, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Segmentation correction toolkit for ASR output"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  uint64_t seed_default = 0;
  try {
    seed_default = DefaultSeed();
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  PrepArgs prep;
  prep.cfg.seed = seed_default;
  auto *prep_cmd = app.add_subcommand("prep", "Build train/valid instances from subtitle files");
  prep_cmd->add_option("--input", prep.inputs, "Directory of subtitle files (repeatable)")
      ->required();
  prep_cmd->add_option("--out-dir", prep.out_dir)->required();
  prep_cmd->add_option("--subwords", prep.subwords, "Reuse an existing subword model");
  prep_cmd->add_option("--merges", prep.merges, "BPE merge operations")->capture_default_str();
  prep_cmd->add_flag("--word-level", prep.word_level, "Skip subword encoding");
  prep_cmd->add_option("--min-len", prep.cfg.min_len)->capture_default_str();
  prep_cmd->add_option("--max-len", prep.cfg.max_len)->capture_default_str();
  prep_cmd->add_option("--train-fraction", prep.cfg.train_fraction)->capture_default_str();
  prep_cmd->add_option("--max-documents", prep.cfg.max_documents)->capture_default_str();
  prep_cmd->add_option("--seed", prep.cfg.seed);
  prep_cmd->add_option("--jobs", prep.jobs)->capture_default_str();

  SynthArgs synth;
  synth.noise.seed = seed_default;
  auto *synth_cmd = app.add_subcommand("synth", "Add synthetic acoustic segmentation (gamma)");
  synth_cmd->add_option("--input", synth.input)->required();
  synth_cmd->add_option("--output", synth.output)->required();
  synth_cmd->add_option("--under-rate", synth.noise.under_rate)->capture_default_str();
  synth_cmd->add_option("--over-rate", synth.noise.over_rate)->capture_default_str();
  synth_cmd->add_option("--noise-mode", synth.mode, "both|under_only|over_only|none")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.noise.seed);

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "Train a boundary tagger");
  train_cmd->add_option("--train", train.train)->required();
  train_cmd->add_option("--valid", train.valid)->required();
  train_cmd->add_option("--out", train.out)->required();
  train_cmd->add_option("--pretrained-embeddings", train.pretrained,
                        "Text vectors, one 'word v1 ... vD' per line");
  train.flags.Register(train_cmd, true);
  train_cmd->add_flag("--resample-gamma", train.resample_gamma,
                      "Redraw gamma from the labels every epoch");
  train_cmd->add_option("--under-rate", train.under_rate);
  train_cmd->add_option("--over-rate", train.over_rate);
  train_cmd->add_option("--noise-mode", train.noise_mode);

  TrainArgs finetune;
  auto *ft_cmd = app.add_subcommand("finetune", "Continue training a tagger on new data");
  ft_cmd->add_option("--model", finetune.model)->required();
  ft_cmd->add_option("--train", finetune.train)->required();
  ft_cmd->add_option("--valid", finetune.valid)->required();
  ft_cmd->add_option("--out", finetune.out)->required();
  finetune.flags.Register(ft_cmd, false);
  ft_cmd->add_flag("--resample-gamma", finetune.resample_gamma);
  ft_cmd->add_option("--under-rate", finetune.under_rate);
  ft_cmd->add_option("--over-rate", finetune.over_rate);
  ft_cmd->add_option("--noise-mode", finetune.noise_mode);

  CorrectArgs correct;
  auto *correct_cmd = app.add_subcommand("correct", "Re-segment ASR utterances");
  correct_cmd->add_option("--model", correct.model);
  correct_cmd->add_option("--stub", correct.stub, "Stand-in predictor: echo-gamma");
  correct_cmd->add_flag("--acoustic", correct.acoustic, "Emit the acoustic segmentation");
  correct_cmd->add_option("--subwords", correct.subwords);
  correct_cmd->add_option("--input", correct.input)->required();
  correct_cmd->add_option("--output", correct.output, "Output file (default stdout)");
  correct_cmd->add_option("--format", correct.format, "lines|jsonl|concat")
      ->capture_default_str();
  correct_cmd->add_option("--threshold", correct.threshold);
  correct_cmd->add_option("--jobs", correct.jobs)->capture_default_str();

  EvalSegArgs eval_seg;
  auto *seg_cmd = app.add_subcommand("eval-seg", "Boundary precision/recall/F1");
  seg_cmd->add_option("--pred", eval_seg.pred, "Predicted transcripts (jsonl)");
  seg_cmd->add_option("--gold", eval_seg.gold, "Reference transcripts (jsonl)");
  seg_cmd->add_option("--model", eval_seg.model);
  seg_cmd->add_option("--instances", eval_seg.instances, "Instances with gamma and labels");
  seg_cmd->add_option("--threshold", eval_seg.threshold);
  seg_cmd->add_option("--output", eval_seg.output);

  EvalRetrievalArgs eval_ret;
  auto *ret_cmd = app.add_subcommand("eval-retrieval", "AQWV / MQWV from qrels and a run");
  ret_cmd->add_option("--qrels", eval_ret.qrels)->required();
  ret_cmd->add_option("--run", eval_ret.run)->required();
  ret_cmd->add_option("--beta", eval_ret.beta)->capture_default_str();
  ret_cmd->add_option("--threshold", eval_ret.threshold, "Score threshold for AQWV")
      ->capture_default_str();
  ret_cmd->add_option("--collection-size", eval_ret.collection_size,
                      "Override N (default: distinct judged documents)");
  ret_cmd->add_flag("--per-query-sweep", eval_ret.per_query_sweep);
  ret_cmd->add_flag("--rank-sweep", eval_ret.rank_sweep);
  ret_cmd->add_option("--output", eval_ret.output);

  AriArgs ari;
  auto *ari_cmd = app.add_subcommand("ari-report", "Readability per document and quartiles");
  ari_cmd->add_option("--input", ari.input, "Transcripts (jsonl)")->required();
  ari_cmd->add_option("--output", ari.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*prep_cmd) return RunPrep(prep);
    if (*synth_cmd) return RunSynth(synth);
    if (*train_cmd) return RunTrain(train);
    if (*ft_cmd) return RunFinetune(finetune);
    if (*correct_cmd) return RunCorrect(correct);
    if (*seg_cmd) return RunEvalSeg(eval_seg);
    if (*ret_cmd) return RunEvalRetrieval(eval_ret);
    if (*ari_cmd) return RunAriReport(ari);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError &e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
