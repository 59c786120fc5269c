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


// segcorr/tagger.cc

#include "segcorr/tagger.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "segcorr/errors.h"
#include "segcorr/rng.h"
#include "segcorr/text.h"

namespace segcorr {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstMap = Eigen::Map<const MatrixXd>;
using MutMap = Eigen::Map<MatrixXd>;

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatHex(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string &s, std::chars_format fmt = std::chars_format::general) {
  double v = 0.0;
  const char *end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v, fmt);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int64_t ParseInt(const std::string &s) {
  int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

uint64_t ParseUint(const std::string &s) {
  uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  return v;
}

bool ParseBool(const std::string &s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

VectorXd SigmoidVec(const VectorXd &x) { return x.unaryExpr(&Sigmoid); }

}  // namespace

// ---------------------------------------------------------------------------
// ModelConfig

void ModelConfig::Validate() const {
  if (token_embed_dim < 1 || flag_embed_dim < 1 || hidden_units < 1 || layers < 1)
    throw std::invalid_argument("model dimensions must be positive");
  if (!(learning_rate > 0)) throw std::invalid_argument("learning_rate must be > 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (max_epochs < 0 || patience < 1)
    throw std::invalid_argument("need max_epochs >= 0 and patience >= 1");
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0))
    throw std::invalid_argument("decision_threshold must lie in (0, 1)");
}

std::map<std::string, std::string> ModelConfig::ToKeyValues() const {
  return {
      {"token_embed_dim", std::to_string(token_embed_dim)},
      {"flag_embed_dim", std::to_string(flag_embed_dim)},
      {"hidden_units", std::to_string(hidden_units)},
      {"layers", std::to_string(layers)},
      {"learning_rate", FormatDouble(learning_rate)},
      {"batch_size", std::to_string(batch_size)},
      {"max_epochs", std::to_string(max_epochs)},
      {"patience", std::to_string(patience)},
      {"decision_threshold", FormatDouble(decision_threshold)},
      {"use_gamma_input", use_gamma_input ? "true" : "false"},
      {"freeze_embeddings", freeze_embeddings ? "true" : "false"},
      {"seed", std::to_string(seed)},
  };
}

void ModelConfig::Update(const std::map<std::string, std::string> &kv) {
  for (const auto &[key, value] : kv) {
    if (key == "token_embed_dim") token_embed_dim = static_cast<int>(ParseInt(value));
    else if (key == "flag_embed_dim") flag_embed_dim = static_cast<int>(ParseInt(value));
    else if (key == "hidden_units") hidden_units = static_cast<int>(ParseInt(value));
    else if (key == "layers") layers = static_cast<int>(ParseInt(value));
    else if (key == "learning_rate") learning_rate = ParseDouble(value);
    else if (key == "batch_size") batch_size = static_cast<int>(ParseInt(value));
    else if (key == "max_epochs") max_epochs = static_cast<int>(ParseInt(value));
    else if (key == "patience") patience = static_cast<int>(ParseInt(value));
    else if (key == "decision_threshold") decision_threshold = ParseDouble(value);
    else if (key == "use_gamma_input") use_gamma_input = ParseBool(value);
    else if (key == "freeze_embeddings") freeze_embeddings = ParseBool(value);
    else if (key == "seed") seed = ParseUint(value);
    else throw std::invalid_argument("unknown model config key '" + key + "'");
  }
}

std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ": expected key=value, got '" + line + "'");
    kv[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return kv;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() { Add("<unk>"); }

Vocabulary Vocabulary::FromInstances(const std::vector<Instance> &instances) {
  std::set<std::string> distinct;
  for (const auto &inst : instances) distinct.insert(inst.tokens.begin(), inst.tokens.end());
  Vocabulary vocab;
  for (const auto &t : distinct) vocab.Add(t);
  return vocab;
}

void Vocabulary::Add(const std::string &token) {
  if (ids_.count(token)) return;
  ids_.emplace(token, static_cast<int>(tokens_.size()));
  tokens_.push_back(token);
}

int Vocabulary::Id(const std::string &token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnknownId : it->second;
}

// ---------------------------------------------------------------------------
// TaggerModel


namespace {

// Activations of one LSTM direction over a sequence, kept for backprop.
struct DirectionCache {
  MatrixXd gates;  // activated i, f, g, o stacked; 4H x n
  MatrixXd c;
  MatrixXd tanh_c;
  MatrixXd h;
};

std::string LayerName(int layer, int dir, const char *what) {
  return "l" + std::to_string(layer) + (dir == 0 ? ".fwd." : ".bwd.") + what;
}

void RunDirection(const MatrixXd &x, const ConstMap &w, const ConstMap &u,
                  const ConstMap &b, bool reverse, DirectionCache *out) {
  const Eigen::Index n = x.cols(), hidden = u.cols();
  MatrixXd z = w * x;
  z.colwise() += b.col(0);
  out->gates.resize(4 * hidden, n);
  out->c.resize(hidden, n);
  out->tanh_c.resize(hidden, n);
  out->h.resize(hidden, n);
  VectorXd h_prev = VectorXd::Zero(hidden), c_prev = VectorXd::Zero(hidden);
  for (Eigen::Index s = 0; s < n; ++s) {
    Eigen::Index t = reverse ? n - 1 - s : s;
    VectorXd pre = z.col(t) + u * h_prev;
    VectorXd i = SigmoidVec(pre.segment(0, hidden));
    VectorXd f = SigmoidVec(pre.segment(hidden, hidden));
    VectorXd g = pre.segment(2 * hidden, hidden).array().tanh().matrix();
    VectorXd o = SigmoidVec(pre.segment(3 * hidden, hidden));
    VectorXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    VectorXd tc = c.array().tanh().matrix();
    VectorXd h = o.cwiseProduct(tc);
    out->gates.col(t) << i, f, g, o;
    out->c.col(t) = c;
    out->tanh_c.col(t) = tc;
    out->h.col(t) = h;
    h_prev = std::move(h);
    c_prev = std::move(c);
  }
}

// Backpropagation through time for one direction. Accumulates parameter
// gradients and returns d(loss)/d(input).
MatrixXd BackDirection(const MatrixXd &x, const ConstMap &w, const ConstMap &u,
                       const DirectionCache &cache, bool reverse,
                       const MatrixXd &d_h, MutMap &grad_w, MutMap &grad_u,
                       MutMap &grad_b) {
  const Eigen::Index n = x.cols(), hidden = u.cols();
  MatrixXd d_z(4 * hidden, n);
  VectorXd dh_next = VectorXd::Zero(hidden), dc_next = VectorXd::Zero(hidden);
  const VectorXd zero = VectorXd::Zero(hidden);
  for (Eigen::Index s = n - 1; s >= 0; --s) {
    Eigen::Index t = reverse ? n - 1 - s : s;
    Eigen::Index prev = reverse ? t + 1 : t - 1;
    auto gates = cache.gates.col(t);
    auto i = gates.segment(0, hidden).array();
    auto f = gates.segment(hidden, hidden).array();
    auto g = gates.segment(2 * hidden, hidden).array();
    auto o = gates.segment(3 * hidden, hidden).array();
    auto tc = cache.tanh_c.col(t).array();
    VectorXd c_prev = s > 0 ? VectorXd(cache.c.col(prev)) : zero;
    VectorXd h_prev = s > 0 ? VectorXd(cache.h.col(prev)) : zero;

    Eigen::ArrayXd dh = (d_h.col(t) + dh_next).array();
    Eigen::ArrayXd d_o = dh * tc;
    Eigen::ArrayXd dc = dh * o * (1.0 - tc.square()) + dc_next.array();
    Eigen::ArrayXd d_i = dc * g;
    Eigen::ArrayXd d_g = dc * i;
    Eigen::ArrayXd d_f = dc * c_prev.array();
    dc_next = (dc * f).matrix();

    auto dz = d_z.col(t);
    dz.segment(0, hidden) = (d_i * i * (1.0 - i)).matrix();
    dz.segment(hidden, hidden) = (d_f * f * (1.0 - f)).matrix();
    dz.segment(2 * hidden, hidden) = (d_g * (1.0 - g.square())).matrix();
    dz.segment(3 * hidden, hidden) = (d_o * o * (1.0 - o)).matrix();
    dh_next = u.transpose() * dz;
    grad_u.noalias() += dz * h_prev.transpose();
  }
  grad_w.noalias() += d_z * x.transpose();
  grad_b.col(0) += d_z.rowwise().sum();
  return w.transpose() * d_z;
}

}  // namespace

struct TaggerModel::ForwardCache {
  struct Layer {
    MatrixXd input;
    DirectionCache dir[2];
  };
  std::vector<Layer> layers;
  MatrixXd top;  // 2H x n
  VectorXd probs;
};

TaggerModel::TaggerModel(ModelConfig config, Vocabulary vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  config_.Validate();
  BuildLayout();
  Rng rng(DeriveSeed(config_.seed, "init"));
  const double lstm_scale = 1.0 / std::sqrt(static_cast<double>(config_.hidden_units));
  for (const Block &b : blocks_) {
    bool embedding = b.name == "token_embed" || b.name == "flag_embed";
    double scale = embedding ? 0.1 : lstm_scale;
    for (size_t k = 0; k < b.size(); ++k)
      params_[static_cast<Eigen::Index>(b.offset + k)] = rng.UniformReal(-scale, scale);
  }
}

void TaggerModel::BuildLayout() {
  blocks_.clear();
  size_t offset = 0;
  auto add = [&](std::string name, size_t rows, size_t cols) {
    blocks_.push_back({std::move(name), offset, rows, cols});
    offset += rows * cols;
  };
  const size_t hidden = config_.hidden_units;
  add("token_embed", config_.token_embed_dim, vocab_.size());
  if (config_.use_gamma_input) add("flag_embed", config_.flag_embed_dim, 2);
  for (int l = 0; l < config_.layers; ++l) {
    size_t in = l == 0 ? config_.input_dim() : 2 * hidden;
    for (int d = 0; d < 2; ++d) {
      add(LayerName(l, d, "W"), 4 * hidden, in);
      add(LayerName(l, d, "U"), 4 * hidden, hidden);
      add(LayerName(l, d, "b"), 4 * hidden, 1);
    }
  }
  add("proj.w", 2 * hidden, 1);
  add("proj.b", 1, 1);
  params_ = VectorXd::Zero(static_cast<Eigen::Index>(offset));
}

const TaggerModel::Block &TaggerModel::block(const std::string &name) const {
  for (const Block &b : blocks_)
    if (b.name == name) return b;
  throw std::out_of_range("no parameter block '" + name + "'");
}

Eigen::VectorXd TaggerModel::Embed(int token_id, int flag) const {
  if (token_id < 0 || token_id >= vocab_.size())
    throw std::out_of_range("token id " + std::to_string(token_id) +
                            " outside vocabulary");
  if (flag != 0 && flag != 1) throw std::out_of_range("flag must be 0 or 1");
  const Block &g = block("token_embed");
  ConstMap table(params_.data() + g.offset, g.rows, g.cols);
  VectorXd e(config_.input_dim());
  e.head(config_.token_embed_dim) = table.col(token_id);
  if (config_.use_gamma_input) {
    const Block &fb = block("flag_embed");
    ConstMap flags(params_.data() + fb.offset, fb.rows, fb.cols);
    e.tail(config_.flag_embed_dim) = flags.col(flag);
  }
  return e;
}

void TaggerModel::RunForward(const Example &ex, ForwardCache *cache) const {
  const Eigen::Index n = static_cast<Eigen::Index>(ex.ids.size());
  if (n == 0) throw std::invalid_argument("forward: empty sequence");
  if (ex.gamma.size() != ex.ids.size())
    throw std::invalid_argument("forward: tokens and gamma differ in length");
  MatrixXd x(config_.input_dim(), n);
  for (Eigen::Index t = 0; t < n; ++t)
    x.col(t) = Embed(ex.ids[t], config_.use_gamma_input ? ex.gamma[t] : 0);

  auto map = [this](const std::string &name) {
    const Block &b = block(name);
    return ConstMap(params_.data() + b.offset, b.rows, b.cols);
  };
  const Eigen::Index hidden = config_.hidden_units;
  cache->layers.resize(config_.layers);
  for (int l = 0; l < config_.layers; ++l) {
    auto &layer = cache->layers[l];
    layer.input = l == 0 ? std::move(x) : cache->top;
    for (int d = 0; d < 2; ++d)
      RunDirection(layer.input, map(LayerName(l, d, "W")), map(LayerName(l, d, "U")),
                   map(LayerName(l, d, "b")), d == 1, &layer.dir[d]);
    cache->top.resize(2 * hidden, n);
    cache->top.topRows(hidden) = layer.dir[0].h;
    cache->top.bottomRows(hidden) = layer.dir[1].h;
  }
  VectorXd logits = cache->top.transpose() * map("proj.w").col(0);
  logits.array() += map("proj.b")(0, 0);
  cache->probs = SigmoidVec(logits);
}

double TaggerModel::Backward(const Example &ex, const ForwardCache &cache,
                             double scale, Eigen::VectorXd *grad) const {
  const Eigen::Index n = static_cast<Eigen::Index>(ex.ids.size());
  const Eigen::Index hidden = config_.hidden_units;
  const double eps = kProbEpsilon;
  double loss = 0.0;
  VectorXd d_logit(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double p = cache.probs[t];
    double clamped = std::clamp(p, eps, 1.0 - eps);
    int y = ex.labels[t];
    loss -= y ? std::log(clamped) : std::log(1.0 - clamped);
    d_logit[t] = (p > eps && p < 1.0 - eps) ? scale * (p - y) : 0.0;
  }
  if (grad == nullptr) return loss;

  auto map = [this](const std::string &name) {
    const Block &b = block(name);
    return ConstMap(params_.data() + b.offset, b.rows, b.cols);
  };
  auto gmap = [this, grad](const std::string &name) {
    const Block &b = block(name);
    return MutMap(grad->data() + b.offset, b.rows, b.cols);
  };

  MutMap g_proj_w = gmap("proj.w");
  g_proj_w.col(0).noalias() += cache.top * d_logit;
  gmap("proj.b")(0, 0) += d_logit.sum();
  MatrixXd d_top = map("proj.w").col(0) * d_logit.transpose();

  for (int l = config_.layers - 1; l >= 0; --l) {
    const auto &layer = cache.layers[l];
    MatrixXd d_in = MatrixXd::Zero(layer.input.rows(), n);
    for (int d = 0; d < 2; ++d) {
      MutMap gw = gmap(LayerName(l, d, "W"));
      MutMap gu = gmap(LayerName(l, d, "U"));
      MutMap gb = gmap(LayerName(l, d, "b"));
      MatrixXd d_h = d == 0 ? MatrixXd(d_top.topRows(hidden))
                            : MatrixXd(d_top.bottomRows(hidden));
      d_in += BackDirection(layer.input, map(LayerName(l, d, "W")),
                            map(LayerName(l, d, "U")), layer.dir[d], d == 1, d_h,
                            gw, gu, gb);
    }
    d_top = std::move(d_in);
  }

  MutMap g_tok = gmap("token_embed");
  const Eigen::Index e_dim = config_.token_embed_dim;
  for (Eigen::Index t = 0; t < n; ++t) g_tok.col(ex.ids[t]) += d_top.col(t).head(e_dim);
  if (config_.use_gamma_input) {
    MutMap g_flag = gmap("flag_embed");
    for (Eigen::Index t = 0; t < n; ++t)
      g_flag.col(ex.gamma[t]) += d_top.col(t).tail(config_.flag_embed_dim);
  }
  return loss;
}

std::vector<double> TaggerModel::Forward(const std::vector<int> &ids,
                                         const Tags &gamma) const {
  ForwardCache cache;
  RunForward({ids, gamma, {}}, &cache);
  return {cache.probs.data(), cache.probs.data() + cache.probs.size()};
}

std::vector<double> TaggerModel::Forward(const std::vector<std::string> &tokens,
                                         const Tags &gamma) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto &t : tokens) ids.push_back(vocab_.Id(t));
  return Forward(ids, gamma);
}

Eigen::MatrixXd TaggerModel::Encode(const std::vector<int> &ids,
                                    const Tags &gamma) const {
  ForwardCache cache;
  RunForward({ids, gamma, {}}, &cache);
  return cache.top;
}

Tags TaggerModel::Predict(const std::vector<std::string> &tokens, const Tags &gamma,
                          double threshold) const {
  return Threshold(Forward(tokens, gamma), threshold);
}

Example TaggerModel::ToExample(const Instance &inst) const {
  Example ex;
  ex.ids.reserve(inst.tokens.size());
  for (const auto &t : inst.tokens) ex.ids.push_back(vocab_.Id(t));
  ex.gamma = inst.has_gamma() ? inst.gamma : Tags(inst.tokens.size(), 0);
  ex.labels = inst.labels;
  return ex;
}

double TaggerModel::Loss(const std::vector<Example> &batch) const {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto &ex : batch) {
    ForwardCache cache;
    RunForward(ex, &cache);
    total += Backward(ex, cache, 0.0, nullptr);
  }
  return total / static_cast<double>(batch.size());
}

double TaggerModel::LossAndGradient(const std::vector<Example> &batch,
                                    Eigen::VectorXd *grad) const {
  grad->setZero(params_.size());
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const auto &ex : batch) {
    ForwardCache cache;
    RunForward(ex, &cache);
    total += Backward(ex, cache, scale, grad);
  }
  return total * scale;
}

size_t TaggerModel::LoadPretrainedEmbeddings(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  const Block &g = block("token_embed");
  MutMap table(params_.data() + g.offset, g.rows, g.cols);
  const std::string marker = "@@";
  // Subword pieces with a continuation marker also match the bare string.
  std::unordered_map<std::string, std::vector<int>> wanted;
  for (int id = 1; id < vocab_.size(); ++id) {
    std::string t = vocab_.Token(id);
    wanted[t].push_back(id);
    if (t.size() > marker.size() && t.ends_with(marker))
      wanted[t.substr(0, t.size() - marker.size())].push_back(id);
  }
  std::set<int> found;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields = SplitWhitespace(line);
    if (fields.size() < 2) continue;
    // Skip the "<count> <dim>" header of word2vec-style files.
    if (fields.size() == 2 && found.empty()) continue;
    auto it = wanted.find(fields[0]);
    if (it == wanted.end()) continue;
    if (static_cast<int>(fields.size()) - 1 != config_.token_embed_dim)
      throw DataError(path.string() + ": vector for '" + fields[0] + "' has " +
                      std::to_string(fields.size() - 1) + " dims, expected " +
                      std::to_string(config_.token_embed_dim));
    VectorXd v(config_.token_embed_dim);
    try {
      for (int k = 0; k < config_.token_embed_dim; ++k) v[k] = ParseDouble(fields[k + 1]);
    } catch (const std::invalid_argument &e) {
      throw DataError(path.string() + ": " + e.what());
    }
    for (int id : it->second) {
      // An exact match beats a marker-stripped one.
      if (found.count(id) && vocab_.Token(id) != fields[0]) continue;
      table.col(id) = v;
      found.insert(id);
    }
  }
  return found.size();
}

void TaggerModel::Save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << kMagic << '\n';
  const auto kv = config_.ToKeyValues();
  out << "config " << kv.size() << '\n';
  for (const auto &[k, v] : kv) out << k << '=' << v << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto &t : vocab_.tokens()) out << t << '\n';
  out << "params " << params_.size() << '\n';
  for (Eigen::Index k = 0; k < params_.size(); ++k) out << FormatHex(params_[k]) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

TaggerModel TaggerModel::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  auto fail = [&path](const std::string &msg) {
    return DataError(path.string() + ": " + msg);
  };
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw fail(std::string("not a checkpoint (missing ") + kMagic + " magic)");
  auto section = [&](const std::string &name) -> size_t {
    std::string tag;
    size_t count = 0;
    if (!std::getline(in, line) || !(std::istringstream(line) >> tag >> count) ||
        tag != name)
      throw fail("expected '" + name + " <count>'");
    return count;
  };
  std::map<std::string, std::string> kv;
  for (size_t n = section("config"), i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw fail("truncated config");
    auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("bad config line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  TaggerModel model;
  try {
    model.config_.Update(kv);
    model.config_.Validate();
  } catch (const std::invalid_argument &e) {
    throw fail(e.what());
  }
  size_t n_vocab = section("vocab");
  std::vector<std::string> tokens;
  for (size_t i = 0; i < n_vocab; ++i) {
    if (!std::getline(in, line)) throw fail("truncated vocabulary");
    tokens.push_back(line);
  }
  if (tokens.empty() || tokens[0] != "<unk>") throw fail("vocabulary must start with <unk>");
  for (size_t i = 1; i < tokens.size(); ++i) model.vocab_.Add(tokens[i]);
  if (static_cast<size_t>(model.vocab_.size()) != tokens.size())
    throw fail("duplicate vocabulary entries");
  model.BuildLayout();
  size_t n_params = section("params");
  if (n_params != model.num_params())
    throw fail("parameter count " + std::to_string(n_params) + " does not match layout (" +
               std::to_string(model.num_params()) + ")");
  for (size_t k = 0; k < n_params; ++k) {
    if (!std::getline(in, line)) throw fail("truncated parameters");
    try {
      model.params_[static_cast<Eigen::Index>(k)] = ParseDouble(line, std::chars_format::hex);
    } catch (const std::invalid_argument &e) {
      throw fail(e.what());
    }
  }
  return model;
}

Tags Threshold(const std::vector<double> &probs, double threshold) {
  Tags out(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] >= threshold ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Training

namespace {

class Adam {
 public:
  Adam(Eigen::Index n, double lr) : lr_(lr), m_(VectorXd::Zero(n)), v_(VectorXd::Zero(n)) {}

  // Updates params[begin, end) from the matching gradient slice.
  void Step(VectorXd &params, const VectorXd &grad, Eigen::Index begin) {
    ++step_;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double c1 = 1.0 - std::pow(b1, step_), c2 = 1.0 - std::pow(b2, step_);
    const Eigen::Index n = params.size() - begin;
    auto g = grad.segment(begin, n).array();
    auto m = m_.segment(begin, n).array();
    auto v = v_.segment(begin, n).array();
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.square();
    params.segment(begin, n).array() -= lr_ * (m / c1) / ((v / c2).sqrt() + eps);
  }

 private:
  double lr_;
  int step_ = 0;
  VectorXd m_, v_;
};

void CheckFinite(double loss, const std::string &where) {
  if (!std::isfinite(loss)) throw NumericError("non-finite loss " + where);
}

TrainResult FitLoop(TaggerModel model, const std::vector<Instance> &train,
                    const std::vector<Instance> &valid, const ModelConfig &cfg,
                    const TrainOptions &options) {
  if (train.empty() || valid.empty())
    throw DataError("training and validation sets must be non-empty");
  cfg.Validate();
  for (const auto &inst : train) CheckInstance(inst);
  for (const auto &inst : valid) CheckInstance(inst);

  std::vector<Instance> train_set = train;
  std::vector<Example> train_ex, valid_ex;
  for (const auto &inst : train_set) train_ex.push_back(model.ToExample(inst));
  for (const auto &inst : valid) valid_ex.push_back(model.ToExample(inst));

  TrainResult result;
  result.best_valid_loss = model.Loss(valid_ex);
  CheckFinite(result.best_valid_loss, "on validation set before training");
  result.best_epoch = 0;
  VectorXd best_params = model.params();
  EpochRecord start{0, std::numeric_limits<double>::quiet_NaN(), result.best_valid_loss};
  result.history.push_back(start);
  if (options.on_epoch) options.on_epoch(start);

  // Frozen token embeddings sit at the front of the parameter vector.
  const Eigen::Index update_from =
      cfg.freeze_embeddings ? static_cast<Eigen::Index>(model.block("token_embed").size()) : 0;
  Adam adam(static_cast<Eigen::Index>(model.num_params()), cfg.learning_rate);
  VectorXd grad;
  int since_best = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (options.resample_gamma) {
      NoiseParams noise = *options.resample_gamma;
      SynthesizeCorpus(train_set, noise, "epoch" + std::to_string(epoch));
      for (size_t i = 0; i < train_set.size(); ++i) train_ex[i].gamma = train_set[i].gamma;
    }
    std::vector<size_t> order(train_ex.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(DeriveSeed(cfg.seed, "shuffle:" + std::to_string(epoch)));
    rng.Shuffle(order);

    double epoch_loss = 0.0;
    for (size_t start_idx = 0; start_idx < order.size(); start_idx += cfg.batch_size) {
      size_t end_idx = std::min(order.size(), start_idx + cfg.batch_size);
      std::vector<Example> batch;
      for (size_t k = start_idx; k < end_idx; ++k) batch.push_back(train_ex[order[k]]);
      double loss = model.LossAndGradient(batch, &grad);
      CheckFinite(loss, "at epoch " + std::to_string(epoch));
      if (!grad.allFinite())
        throw NumericError("non-finite gradient at epoch " + std::to_string(epoch));
      epoch_loss += loss * static_cast<double>(batch.size());
      adam.Step(model.mutable_params(), grad, update_from);
    }
    epoch_loss /= static_cast<double>(train_ex.size());
    double valid_loss = model.Loss(valid_ex);
    CheckFinite(valid_loss, "on validation set at epoch " + std::to_string(epoch));
    EpochRecord rec{epoch, epoch_loss, valid_loss};
    result.history.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);
    if (valid_loss < result.best_valid_loss) {
      result.best_valid_loss = valid_loss;
      result.best_epoch = epoch;
      best_params = model.params();
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  model.mutable_params() = best_params;
  result.model = std::move(model);
  return result;
}

}  // namespace

TrainResult Train(const std::vector<Instance> &train, const std::vector<Instance> &valid,
                  const ModelConfig &cfg, const TrainOptions &options) {
  cfg.Validate();
  TaggerModel model(cfg, Vocabulary::FromInstances(train));
  if (!options.pretrained_embeddings.empty())
    model.LoadPretrainedEmbeddings(options.pretrained_embeddings);
  return FitLoop(std::move(model), train, valid, cfg, options);
}

TrainResult FineTune(const TaggerModel &model, const std::vector<Instance> &train,
                     const std::vector<Instance> &valid, const ModelConfig &cfg,
                     const TrainOptions &options) {
  ModelConfig merged = model.config();
  merged.learning_rate = cfg.learning_rate;
  merged.batch_size = cfg.batch_size;
  merged.max_epochs = cfg.max_epochs;
  merged.patience = cfg.patience;
  merged.freeze_embeddings = cfg.freeze_embeddings;
  merged.seed = cfg.seed;
  TaggerModel start = model;
  start.mutable_config() = merged;
  return FitLoop(std::move(start), train, valid, merged, options);
}

}  // namespace segcorr
