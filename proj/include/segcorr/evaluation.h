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


// segcorr/evaluation.h

#ifndef SEGCORR_EVALUATION_H_
#define SEGCORR_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "segcorr/corpus.h"
#include "segcorr/resegment.h"

namespace segcorr {

// ---------------------------------------------------------------------------
// Segmentation quality

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Position-exact precision/recall/F1 on the 1 labels. When neither side has
/// a boundary all three are 1.0; otherwise an empty denominator gives 0.0.
Prf BoundaryPrf(const Tags &pred, const Tags &gold);

/// Micro-averaged counts across many sequences.
struct BoundaryCounts {
  int64_t tp = 0, fp = 0, fn = 0;
  void Add(const Tags &pred, const Tags &gold);
  Prf Scores() const;
};

/// Boundary tags of a transcript: 1 on the last token of every segment.
Tags TranscriptTags(const SegmentedTranscript &t);

/// All segments joined by single spaces and lowercased, for document-level
/// scoring by an external tool.
std::string ConcatDocument(const SegmentedTranscript &t);

// ---------------------------------------------------------------------------
// Readability

/// 4.71 * chars/words + 0.5 * words/sentences - 21.43 with chars counting
/// letters and digits. Throws std::invalid_argument on zero words or
/// sentences.
double AriFromCounts(size_t chars, size_t words, size_t sentences);
/// Each non-empty line of `text` is one sentence.
double Ari(const std::string &text);
/// Each segment is one sentence.
double Ari(const SegmentedTranscript &t);

using ScoredId = std::pair<std::string, double>;

/// Sorts ascending and cuts into 4 contiguous buckets; sizes differ by at
/// most one, with the extra items going to the lower quartiles.
std::vector<std::vector<ScoredId>> QuartileSplit(std::vector<ScoredId> docs);

// ---------------------------------------------------------------------------
// Retrieval

struct QwvParams {
  double beta = 40.0;
  void Validate() const;
};

/// Per query: documents in descending score order.
using RetrievalRun = std::map<std::string, std::vector<ScoredId>>;

struct RelevanceJudgments {
  std::map<std::string, std::set<std::string>> relevant;
  int64_t collection_size = 0;
};

/// 1 - (P_miss + beta * P_fa) from counts. `retrieved` includes `hits`.
double QwvFromCounts(int64_t hits, int64_t retrieved, int64_t relevant,
                     int64_t collection_size, double beta);

/// QWV of the top `k` entries of `ranked`.
double Qwv(const std::vector<std::string> &ranked, const std::set<std::string> &relevant,
           int64_t collection_size, size_t k, double beta);

struct QwvReport {
  double value = 0.0;
  double threshold = 0.0;  // score threshold, or rank cutoff for rank sweeps
  std::map<std::string, double> per_query;
  std::vector<std::string> skipped_queries;  // in the run but not judged
};

/// Mean QWV over judged queries with at least one relevant document when
/// every document scoring >= threshold is retrieved.
QwvReport AqwvAtThreshold(const RetrievalRun &run, const RelevanceJudgments &judgments,
                          const QwvParams &params, double threshold);

/// Maximum over one global score threshold of the mean QWV. Candidates are
/// every distinct score plus +/- infinity.
QwvReport Mqwv(const RetrievalRun &run, const RelevanceJudgments &judgments,
               const QwvParams &params);

/// Each query at its own best threshold, then averaged.
QwvReport MqwvPerQuery(const RetrievalRun &run, const RelevanceJudgments &judgments,
                       const QwvParams &params);

/// Maximum over one global rank cutoff k of the mean QWV of the top-k lists.
QwvReport MqwvRankSweep(const RetrievalRun &run, const RelevanceJudgments &judgments,
                        const QwvParams &params);

/// "query_id 0 doc_id rel" lines. The collection size is the number of
/// distinct judged documents.
RelevanceJudgments ReadQrels(const std::filesystem::path &path);
/// "query_id Q0 doc_id rank score tag" lines, sorted by score (then rank).
RetrievalRun ReadRun(const std::filesystem::path &path);

}  // namespace segcorr

#endif  // SEGCORR_EVALUATION_H_
