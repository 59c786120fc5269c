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


// segcorr/tagger.h

// Boundary tagger: token and acoustic-flag embeddings feed a stack of
// bidirectional LSTMs; a linear layer with a sigmoid gives the probability
// that a segment boundary follows each token.

#ifndef SEGCORR_TAGGER_H_
#define SEGCORR_TAGGER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "segcorr/corpus.h"
#include "segcorr/noise.h"

namespace segcorr {

struct ModelConfig {
  int token_embed_dim = 300;
  int flag_embed_dim = 16;
  int hidden_units = 512;  // per direction
  int layers = 2;
  double learning_rate = 0.001;
  int batch_size = 32;
  int max_epochs = 30;
  int patience = 3;
  double decision_threshold = 0.5;
  bool use_gamma_input = true;
  bool freeze_embeddings = false;
  uint64_t seed = 0;

  void Validate() const;
  int input_dim() const {
    return token_embed_dim + (use_gamma_input ? flag_embed_dim : 0);
  }

  /// Flat key=value form, as used by config files and checkpoint headers.
  std::map<std::string, std::string> ToKeyValues() const;
  /// Overrides fields named in `kv`; unknown keys throw std::invalid_argument.
  void Update(const std::map<std::string, std::string> &kv);
};

/// Reads a flat "key=value" file; '#' starts a comment.
std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path);

class Vocabulary {
 public:
  static constexpr int kUnknownId = 0;

  Vocabulary();
  /// Every distinct token in `instances`, sorted, after the unknown token.
  static Vocabulary FromInstances(const std::vector<Instance> &instances);

  int Id(const std::string &token) const;
  const std::string &Token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  void Add(const std::string &token);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

/// An instance mapped to vocabulary ids.
struct Example {
  std::vector<int> ids;
  Tags gamma;
  Tags labels;
};

class TaggerModel {
 public:
  static constexpr const char *kMagic = "SEGTAG1";
  static constexpr double kProbEpsilon = 1e-7;

  TaggerModel() = default;
  /// Randomly initialized model: embeddings uniform in [-0.1, 0.1], LSTM and
  /// projection weights uniform in [-1/sqrt(H), 1/sqrt(H)].
  TaggerModel(ModelConfig config, Vocabulary vocab);

  const ModelConfig &config() const { return config_; }
  ModelConfig &mutable_config() { return config_; }
  const Vocabulary &vocab() const { return vocab_; }

  const Eigen::VectorXd &params() const { return params_; }
  Eigen::VectorXd &mutable_params() { return params_; }
  size_t num_params() const { return static_cast<size_t>(params_.size()); }

  /// Concatenated token and flag embedding for one position. Throws
  /// std::out_of_range for ids outside the vocabulary or flags outside {0,1}.
  Eigen::VectorXd Embed(int token_id, int flag) const;

  /// Per-position boundary probabilities, each in (0, 1).
  std::vector<double> Forward(const std::vector<int> &ids, const Tags &gamma) const;
  std::vector<double> Forward(const std::vector<std::string> &tokens,
                              const Tags &gamma) const;

  /// Contextual states of the top layer, one column per position.
  Eigen::MatrixXd Encode(const std::vector<int> &ids, const Tags &gamma) const;

  Tags Predict(const std::vector<std::string> &tokens, const Tags &gamma,
               double threshold) const;

  Example ToExample(const Instance &inst) const;

  /// Mean over examples of the summed per-position negative log-likelihood.
  double Loss(const std::vector<Example> &batch) const;
  /// As Loss; also writes d(loss)/d(params) into `grad`.
  double LossAndGradient(const std::vector<Example> &batch,
                         Eigen::VectorXd *grad) const;

  /// Block offsets into the parameter vector, for optimizers and tests.
  struct Block {
    std::string name;
    size_t offset;
    size_t rows;
    size_t cols;
    size_t size() const { return rows * cols; }
  };
  const std::vector<Block> &blocks() const { return blocks_; }
  const Block &block(const std::string &name) const;

  /// Overwrites token-embedding rows from "word v1 ... vD" lines. Returns the
  /// number of vocabulary entries that were found.
  size_t LoadPretrainedEmbeddings(const std::filesystem::path &path);

  void Save(const std::filesystem::path &path) const;
  static TaggerModel Load(const std::filesystem::path &path);

 private:
  ModelConfig config_;
  Vocabulary vocab_;
  Eigen::VectorXd params_;
  std::vector<Block> blocks_;

  void BuildLayout();

  struct ForwardCache;
  void RunForward(const Example &ex, ForwardCache *cache) const;
  double Backward(const Example &ex, const ForwardCache &cache, double scale,
                  Eigen::VectorXd *grad) const;
};

struct EpochRecord {
  int epoch;
  double train_loss;  // NaN for epoch 0
  double valid_loss;
};

struct TrainOptions {
  /// When set, gamma is redrawn from the labels before every epoch.
  std::optional<NoiseParams> resample_gamma;
  std::function<void(const EpochRecord &)> on_epoch;
  std::filesystem::path pretrained_embeddings;
};

struct TrainResult {
  TaggerModel model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_valid_loss = 0.0;
};

/// Adam with mini-batches; keeps the parameters with the lowest validation
/// loss seen, counting the starting point as epoch 0. Stops after `patience`
/// epochs without improvement. Throws NumericError on a non-finite loss.
TrainResult Train(const std::vector<Instance> &train,
                  const std::vector<Instance> &valid, const ModelConfig &cfg,
                  const TrainOptions &options = {});

/// The same loop started from `model`. Architecture comes from `model`;
/// optimization settings (rate, batch, epochs, patience, seed) from `cfg`.
TrainResult FineTune(const TaggerModel &model, const std::vector<Instance> &train,
                     const std::vector<Instance> &valid, const ModelConfig &cfg,
                     const TrainOptions &options = {});

Tags Threshold(const std::vector<double> &probs, double threshold);

}  // namespace segcorr

#endif  // SEGCORR_TAGGER_H_
