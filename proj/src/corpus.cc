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


// segcorr/corpus.cc

#include "segcorr/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "segcorr/errors.h"
#include "segcorr/text.h"

namespace segcorr {

using ordered_json = nlohmann::ordered_json;

void CorpusPrepConfig::Validate() const {
  if (min_len < 1 || min_len > max_len)
    throw std::invalid_argument("need 1 <= min_len <= max_len");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  if (max_documents < 1)
    throw std::invalid_argument("max_documents must be positive");
}

const std::set<std::string> &DefaultSentencePunctuation() {
  static const std::set<std::string> kPunct = {"(", ")", ":", "-",
                                               "!", "?", "."};
  return kPunct;
}

namespace {

bool MayBeWordInternal(const std::string &c) {
  return c == "-" || c == "." || c == ":";
}

}  // namespace

TokenizedDocument ParseSubtitles(const SubtitleDocument &doc,
                                 const std::set<std::string> &punct_set) {
  TokenizedDocument out;
  auto mark_boundary = [&out]() {
    if (!out.labels.empty()) out.labels.back() = 1;
  };
  for (const std::string &line : doc.lines) {
    for (const std::string &raw : SplitWhitespace(Utf8Lower(line))) {
      std::vector<std::string> chars = Utf8Chars(raw);
      std::string word;
      for (size_t i = 0; i < chars.size(); ++i) {
        const std::string &c = chars[i];
        if (!punct_set.count(c)) {
          word += c;
          continue;
        }
        bool internal = MayBeWordInternal(c) && !word.empty() &&
                        i + 1 < chars.size() && !punct_set.count(chars[i + 1]);
        if (internal) {
          word += c;
          continue;
        }
        if (!word.empty()) {
          out.tokens.push_back(std::move(word));
          out.labels.push_back(0);
          word.clear();
        }
        mark_boundary();
      }
      if (!word.empty()) {
        out.tokens.push_back(std::move(word));
        out.labels.push_back(0);
      }
    }
  }
  return out;
}

std::vector<Instance> ChunkDocument(const std::string &doc_id,
                                    const std::vector<std::string> &tokens,
                                    const Tags &labels,
                                    const CorpusPrepConfig &cfg, Rng &rng) {
  if (tokens.size() != labels.size())
    throw DataError("chunk_document: tokens and labels differ in length");
  std::vector<Instance> instances;
  size_t pos = 0;
  while (pos < tokens.size()) {
    auto drawn = static_cast<size_t>(rng.UniformInt(cfg.min_len, cfg.max_len));
    size_t len = std::min(drawn, tokens.size() - pos);
    Instance inst;
    inst.doc_id = doc_id;
    inst.index = static_cast<int64_t>(instances.size());
    inst.tokens.assign(tokens.begin() + pos, tokens.begin() + pos + len);
    inst.labels.assign(labels.begin() + pos, labels.begin() + pos + len);
    instances.push_back(std::move(inst));
    pos += len;
  }
  return instances;
}

std::vector<SubtitleDocument> DownSample(std::vector<SubtitleDocument> docs,
                                         int max_documents, Rng &rng) {
  if (max_documents < 0 || docs.size() <= static_cast<size_t>(max_documents))
    return docs;
  std::vector<size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);
  order.resize(max_documents);
  std::sort(order.begin(), order.end());
  std::vector<SubtitleDocument> kept;
  kept.reserve(order.size());
  for (size_t i : order) kept.push_back(std::move(docs[i]));
  return kept;
}

std::pair<std::vector<Instance>, std::vector<Instance>> SplitTrainValid(
    std::vector<Instance> instances, const CorpusPrepConfig &cfg) {
  if (instances.size() < 2)
    throw DataError("need at least 2 instances to split train/valid");
  Rng rng(DeriveSeed(cfg.seed, "split"));
  rng.Shuffle(instances);
  auto n = static_cast<int64_t>(instances.size());
  int64_t n_train = std::llround(static_cast<double>(n) * cfg.train_fraction);
  n_train = std::clamp<int64_t>(n_train, 1, n - 1);
  std::vector<Instance> valid(std::make_move_iterator(instances.begin() + n_train),
                              std::make_move_iterator(instances.end()));
  instances.resize(n_train);
  return {std::move(instances), std::move(valid)};
}

std::vector<SubtitleDocument> ReadSubtitleDir(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<SubtitleDocument> docs;
  for (const auto &file : files) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot read " + file.string());
    SubtitleDocument doc;
    doc.doc_id = file.stem().string();
    std::string line;
    while (std::getline(in, line)) doc.lines.push_back(line);
    docs.push_back(std::move(doc));
  }
  return docs;
}

void CheckInstance(const Instance &inst) {
  const std::string where = inst.doc_id + "#" + std::to_string(inst.index);
  if (inst.tokens.empty()) throw DataError(where + ": empty instance");
  if (inst.labels.size() != inst.tokens.size())
    throw DataError(where + ": labels and tokens differ in length");
  if (inst.has_gamma() && inst.gamma.size() != inst.tokens.size())
    throw DataError(where + ": gamma and tokens differ in length");
  auto binary = [](int t) { return t == 0 || t == 1; };
  if (!std::all_of(inst.labels.begin(), inst.labels.end(), binary) ||
      !std::all_of(inst.gamma.begin(), inst.gamma.end(), binary))
    throw DataError(where + ": tags must be 0 or 1");
}

std::string InstanceToJsonLine(const Instance &inst) {
  ordered_json j;
  j["doc_id"] = inst.doc_id;
  j["index"] = inst.index;
  j["tokens"] = inst.tokens;
  if (inst.has_gamma()) j["gamma"] = inst.gamma;
  j["labels"] = inst.labels;
  return j.dump();
}

Instance InstanceFromJsonLine(const std::string &line) {
  Instance inst;
  try {
    auto j = nlohmann::json::parse(line);
    inst.doc_id = j.at("doc_id").get<std::string>();
    inst.index = j.at("index").get<int64_t>();
    inst.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (j.contains("gamma")) inst.gamma = j.at("gamma").get<Tags>();
    inst.labels = j.at("labels").get<Tags>();
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("bad instance record: ") + e.what());
  }
  CheckInstance(inst);
  return inst;
}

std::vector<Instance> ReadInstances(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<Instance> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(InstanceFromJsonLine(line));
  }
  return out;
}

void WriteInstances(const std::filesystem::path &path,
                    const std::vector<Instance> &instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto &inst : instances) out << InstanceToJsonLine(inst) << '\n';
}

}  // namespace segcorr
