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


// segcorr/corpus.h

// Turns subtitle documents into supervised boundary-tagging instances:
// punctuation-derived labels, random-length chunking, down-sampling and the
// train/valid split. Subword encoding lives in subword.h.

#ifndef SEGCORR_CORPUS_H_
#define SEGCORR_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "segcorr/rng.h"

namespace segcorr {

using Tags = std::vector<int>;

struct SubtitleDocument {
  std::string doc_id;
  std::vector<std::string> lines;
};

/// One aligned (tokens, gamma, labels) triple. `gamma` is empty until noise
/// synthesis has run.
struct Instance {
  std::string doc_id;
  int64_t index = 0;
  std::vector<std::string> tokens;
  Tags gamma;
  Tags labels;

  bool has_gamma() const { return !gamma.empty(); }
  size_t size() const { return tokens.size(); }

  bool operator==(const Instance &) const = default;
};

struct CorpusPrepConfig {
  int min_len = 1;
  int max_len = 100;
  double train_fraction = 0.9;
  int max_documents = 2000;
  uint64_t seed = 0;

  // Throws std::invalid_argument on violated invariants.
  void Validate() const;
};

struct TokenizedDocument {
  std::vector<std::string> tokens;
  Tags labels;
};

/// The sentence-final punctuation set: ( ) : - ! ? .
const std::set<std::string> &DefaultSentencePunctuation();

/// Whitespace-tokenizes and lowercases the document, strips every character
/// in `punct_set`, and labels the token preceding each stripped mark with 1.
/// Runs of marks collapse to one boundary. '-', '.' and ':' flanked by
/// non-punctuation characters inside a word are kept (compounds, numbers,
/// abbreviations).
TokenizedDocument ParseSubtitles(const SubtitleDocument &doc,
                                 const std::set<std::string> &punct_set =
                                     DefaultSentencePunctuation());

/// Splits a document left to right into instances with lengths drawn
/// uniformly from [min_len, max_len]; the last instance keeps the remainder.
std::vector<Instance> ChunkDocument(const std::string &doc_id,
                                    const std::vector<std::string> &tokens,
                                    const Tags &labels,
                                    const CorpusPrepConfig &cfg, Rng &rng);

/// Keeps at most `max_documents` documents, sampled without replacement.
/// Survivors stay in input order.
std::vector<SubtitleDocument> DownSample(std::vector<SubtitleDocument> docs,
                                         int max_documents, Rng &rng);

/// Seeded shuffle, then split at `train_fraction`. Both sides are non-empty.
std::pair<std::vector<Instance>, std::vector<Instance>> SplitTrainValid(
    std::vector<Instance> instances, const CorpusPrepConfig &cfg);

/// Reads every regular file in `dir` (sorted by file name) as one document
/// whose doc_id is the file stem.
std::vector<SubtitleDocument> ReadSubtitleDir(const std::filesystem::path &dir);

// JSON-lines instance files.
std::string InstanceToJsonLine(const Instance &inst);
Instance InstanceFromJsonLine(const std::string &line);
std::vector<Instance> ReadInstances(const std::filesystem::path &path);
void WriteInstances(const std::filesystem::path &path,
                    const std::vector<Instance> &instances);

/// Throws DataError unless tokens, labels (and gamma when present) align and
/// all tags are binary.
void CheckInstance(const Instance &inst);

}  // namespace segcorr

#endif  // SEGCORR_CORPUS_H_
