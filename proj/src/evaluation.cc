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


// segcorr/evaluation.cc

#include "segcorr/evaluation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "segcorr/errors.h"
#include "segcorr/text.h"

namespace segcorr {

Prf BoundaryPrf(const Tags &pred, const Tags &gold) {
  if (pred.size() != gold.size())
    throw std::invalid_argument("boundary_prf: prediction and gold differ in length");
  BoundaryCounts counts;
  counts.Add(pred, gold);
  return counts.Scores();
}

void BoundaryCounts::Add(const Tags &pred, const Tags &gold) {
  if (pred.size() != gold.size())
    throw std::invalid_argument("boundary counts: prediction and gold differ in length");
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == 1 && gold[i] == 1) ++tp;
    else if (pred[i] == 1) ++fp;
    else if (gold[i] == 1) ++fn;
  }
}

Prf BoundaryCounts::Scores() const {
  if (tp + fp == 0 && tp + fn == 0) return {1.0, 1.0, 1.0};
  Prf out;
  out.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  out.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  double denom = out.precision + out.recall;
  out.f1 = denom == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / denom;
  return out;
}

Tags TranscriptTags(const SegmentedTranscript &t) {
  Tags tags;
  for (const auto &seg : t.segments) {
    tags.insert(tags.end(), seg.tokens.size(), 0);
    if (!seg.tokens.empty()) tags.back() = 1;
  }
  return tags;
}

std::string ConcatDocument(const SegmentedTranscript &t) {
  std::vector<std::string> tokens;
  for (const auto &seg : t.segments)
    for (const auto &tok : seg.tokens) tokens.push_back(tok);
  return Utf8Lower(Join(tokens, " "));
}

double AriFromCounts(size_t chars, size_t words, size_t sentences) {
  if (words == 0) throw std::invalid_argument("ari: text has no words");
  if (sentences == 0) throw std::invalid_argument("ari: text has no sentences");
  return 4.71 * (static_cast<double>(chars) / static_cast<double>(words)) +
         0.5 * (static_cast<double>(words) / static_cast<double>(sentences)) - 21.43;
}

double Ari(const std::string &text) {
  size_t chars = 0, words = 0, sentences = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    ++sentences;
    words += tokens.size();
    chars += CountAlnumChars(line);
  }
  return AriFromCounts(chars, words, sentences);
}

double Ari(const SegmentedTranscript &t) {
  size_t chars = 0, words = 0;
  for (const auto &seg : t.segments) {
    words += seg.tokens.size();
    for (const auto &tok : seg.tokens) chars += CountAlnumChars(tok);
  }
  return AriFromCounts(chars, words, t.segments.size());
}

std::vector<std::vector<ScoredId>> QuartileSplit(std::vector<ScoredId> docs) {
  if (docs.size() < 4) throw std::invalid_argument("quartile split needs at least 4 documents");
  std::stable_sort(docs.begin(), docs.end(),
                   [](const ScoredId &a, const ScoredId &b) { return a.second < b.second; });
  std::vector<std::vector<ScoredId>> buckets(4);
  size_t base = docs.size() / 4, extra = docs.size() % 4, pos = 0;
  for (size_t q = 0; q < 4; ++q) {
    size_t len = base + (q < extra ? 1 : 0);
    buckets[q].assign(docs.begin() + pos, docs.begin() + pos + len);
    pos += len;
  }
  return buckets;
}

// ---------------------------------------------------------------------------
// Retrieval

void QwvParams::Validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

double QwvFromCounts(int64_t hits, int64_t retrieved, int64_t relevant,
                     int64_t collection_size, double beta) {
  if (relevant < 1) throw std::invalid_argument("qwv: query has no relevant documents");
  if (collection_size <= relevant)
    throw std::invalid_argument("qwv: collection size must exceed the relevant count");
  if (retrieved - hits > collection_size - relevant)
    throw DataError("qwv: more false alarms than non-relevant documents in the collection");
  double p_miss = static_cast<double>(relevant - hits) / static_cast<double>(relevant);
  double p_fa = static_cast<double>(retrieved - hits) /
                static_cast<double>(collection_size - relevant);
  return 1.0 - (p_miss + beta * p_fa);
}

double Qwv(const std::vector<std::string> &ranked, const std::set<std::string> &relevant,
           int64_t collection_size, size_t k, double beta) {
  if (k > ranked.size()) throw std::invalid_argument("qwv: cutoff exceeds ranked list");
  std::set<std::string> seen;
  int64_t hits = 0;
  for (size_t i = 0; i < k; ++i) {
    if (!seen.insert(ranked[i]).second)
      throw DataError("qwv: duplicate document " + ranked[i]);
    if (relevant.count(ranked[i])) ++hits;
  }
  return QwvFromCounts(hits, static_cast<int64_t>(k), static_cast<int64_t>(relevant.size()),
                       collection_size, beta);
}

namespace {

// The queries that enter the average, with per-document relevance flags.
struct QueryTable {
  std::vector<std::string> ids;
  std::vector<std::vector<std::pair<double, bool>>> docs;  // descending score
  std::vector<int64_t> relevant;
  std::vector<std::string> skipped;
};

QueryTable BuildTable(const RetrievalRun &run, const RelevanceJudgments &judgments,
                      const QwvParams &params) {
  params.Validate();
  if (run.empty()) throw DataError("empty retrieval run");
  QueryTable table;
  for (const auto &[qid, _] : run)
    if (!judgments.relevant.count(qid)) table.skipped.push_back(qid);
  static const std::vector<ScoredId> kEmpty;
  for (const auto &[qid, rel] : judgments.relevant) {
    if (rel.empty()) continue;
    auto it = run.find(qid);
    const auto &ranked = it == run.end() ? kEmpty : it->second;
    std::vector<std::pair<double, bool>> docs;
    std::set<std::string> seen;
    for (const auto &[doc, score] : ranked) {
      if (!std::isfinite(score)) throw DataError(qid + ": non-finite score for " + doc);
      if (!seen.insert(doc).second) throw DataError(qid + ": duplicate document " + doc);
      docs.emplace_back(score, rel.count(doc) > 0);
    }
    std::stable_sort(docs.begin(), docs.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });
    table.ids.push_back(qid);
    table.docs.push_back(std::move(docs));
    table.relevant.push_back(static_cast<int64_t>(rel.size()));
  }
  if (table.ids.empty())
    throw DataError("no judged query has a relevant document");
  return table;
}

struct Counts {
  int64_t hits = 0, retrieved = 0;
};

double MeanQwv(const QueryTable &table, const std::vector<Counts> &counts,
               const RelevanceJudgments &judgments, double beta) {
  double sum = 0.0;
  for (size_t q = 0; q < table.ids.size(); ++q)
    sum += QwvFromCounts(counts[q].hits, counts[q].retrieved, table.relevant[q],
                         judgments.collection_size, beta);
  return sum / static_cast<double>(table.ids.size());
}

void FillPerQuery(const QueryTable &table, const std::vector<Counts> &counts,
                  const RelevanceJudgments &judgments, double beta, QwvReport *report) {
  for (size_t q = 0; q < table.ids.size(); ++q)
    report->per_query[table.ids[q]] =
        QwvFromCounts(counts[q].hits, counts[q].retrieved, table.relevant[q],
                      judgments.collection_size, beta);
}

std::vector<Counts> CountsAtThreshold(const QueryTable &table, double threshold) {
  std::vector<Counts> counts(table.ids.size());
  for (size_t q = 0; q < table.ids.size(); ++q)
    for (const auto &[score, rel] : table.docs[q])
      if (score >= threshold) {
        ++counts[q].retrieved;
        if (rel) ++counts[q].hits;
      }
  return counts;
}

}  // namespace

QwvReport AqwvAtThreshold(const RetrievalRun &run, const RelevanceJudgments &judgments,
                          const QwvParams &params, double threshold) {
  QueryTable table = BuildTable(run, judgments, params);
  auto counts = CountsAtThreshold(table, threshold);
  QwvReport report;
  report.value = MeanQwv(table, counts, judgments, params.beta);
  report.threshold = threshold;
  report.skipped_queries = table.skipped;
  FillPerQuery(table, counts, judgments, params.beta, &report);
  return report;
}

QwvReport Mqwv(const RetrievalRun &run, const RelevanceJudgments &judgments,
               const QwvParams &params) {
  QueryTable table = BuildTable(run, judgments, params);
  struct Entry {
    double score;
    size_t query;
    bool relevant;
  };
  std::vector<Entry> entries;
  for (size_t q = 0; q < table.ids.size(); ++q)
    for (const auto &[score, rel] : table.docs[q]) entries.push_back({score, q, rel});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry &a, const Entry &b) { return a.score > b.score; });

  // Sweep from +inf downwards; lowering the threshold past a score admits
  // every entry with that score at once.
  std::vector<Counts> counts(table.ids.size());
  double best = MeanQwv(table, counts, judgments, params.beta);
  double best_threshold = std::numeric_limits<double>::infinity();
  std::vector<Counts> best_counts = counts;
  for (size_t i = 0; i < entries.size();) {
    double score = entries[i].score;
    for (; i < entries.size() && entries[i].score == score; ++i) {
      ++counts[entries[i].query].retrieved;
      if (entries[i].relevant) ++counts[entries[i].query].hits;
    }
    double value = MeanQwv(table, counts, judgments, params.beta);
    if (value > best) {
      best = value;
      best_threshold = score;
      best_counts = counts;
    }
  }
  // -inf admits nothing beyond the lowest score, so it needs no extra step.
  QwvReport report;
  report.value = best;
  report.threshold = best_threshold;
  report.skipped_queries = table.skipped;
  FillPerQuery(table, best_counts, judgments, params.beta, &report);
  return report;
}

QwvReport MqwvPerQuery(const RetrievalRun &run, const RelevanceJudgments &judgments,
                       const QwvParams &params) {
  QueryTable table = BuildTable(run, judgments, params);
  QwvReport report;
  report.skipped_queries = table.skipped;
  report.threshold = std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (size_t q = 0; q < table.ids.size(); ++q) {
    Counts c;
    double best = QwvFromCounts(0, 0, table.relevant[q], judgments.collection_size, params.beta);
    const auto &docs = table.docs[q];
    for (size_t i = 0; i < docs.size();) {
      double score = docs[i].first;
      for (; i < docs.size() && docs[i].first == score; ++i) {
        ++c.retrieved;
        if (docs[i].second) ++c.hits;
      }
      best = std::max(best, QwvFromCounts(c.hits, c.retrieved, table.relevant[q],
                                          judgments.collection_size, params.beta));
    }
    report.per_query[table.ids[q]] = best;
    sum += best;
  }
  report.value = sum / static_cast<double>(table.ids.size());
  return report;
}

QwvReport MqwvRankSweep(const RetrievalRun &run, const RelevanceJudgments &judgments,
                        const QwvParams &params) {
  QueryTable table = BuildTable(run, judgments, params);
  size_t longest = 0;
  for (const auto &docs : table.docs) longest = std::max(longest, docs.size());
  QwvReport report;
  report.skipped_queries = table.skipped;
  std::vector<Counts> counts(table.ids.size()), best_counts = counts;
  double best = MeanQwv(table, counts, judgments, params.beta);
  report.threshold = 0;
  for (size_t k = 1; k <= longest; ++k) {
    for (size_t q = 0; q < table.ids.size(); ++q) {
      if (k > table.docs[q].size()) continue;
      ++counts[q].retrieved;
      if (table.docs[q][k - 1].second) ++counts[q].hits;
    }
    double value = MeanQwv(table, counts, judgments, params.beta);
    if (value > best) {
      best = value;
      best_counts = counts;
      report.threshold = static_cast<double>(k);
    }
  }
  report.value = best;
  FillPerQuery(table, best_counts, judgments, params.beta, &report);
  return report;
}

RelevanceJudgments ReadQrels(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  RelevanceJudgments judgments;
  std::set<std::string> collection;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 4)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 'query_id 0 doc_id rel'");
    const std::string &qid = fields[0], &doc = fields[2], &rel = fields[3];
    if (rel != "0" && rel != "1")
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": rel must be 0 or 1");
    collection.insert(doc);
    auto &set = judgments.relevant[qid];
    if (rel == "1") set.insert(doc);
  }
  judgments.collection_size = static_cast<int64_t>(collection.size());
  return judgments;
}

RetrievalRun ReadRun(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::map<std::string, std::vector<std::tuple<double, long, std::string>>> raw;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 6)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 'query_id Q0 doc_id rank score tag'");
    try {
      raw[fields[0]].emplace_back(std::stod(fields[4]), std::stol(fields[3]), fields[2]);
    } catch (const std::exception &) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad rank or score");
    }
  }
  RetrievalRun run;
  for (auto &[qid, rows] : raw) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      return std::get<1>(a) < std::get<1>(b);
    });
    auto &list = run[qid];
    for (auto &[score, rank, doc] : rows) list.emplace_back(doc, score);
  }
  return run;
}

}  // namespace segcorr
