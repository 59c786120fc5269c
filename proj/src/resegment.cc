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


// segcorr/resegment.cc

#include "segcorr/resegment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "segcorr/errors.h"
#include "segcorr/parallel.h"
#include "segcorr/text.h"

namespace segcorr {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<std::string> Utterance::Words() const {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto &t : tokens) words.push_back(t.text);
  return words;
}

Tags UtteranceGamma(size_t length) {
  if (length == 0) throw DataError("utterance has no tokens");
  Tags gamma(length, 0);
  gamma.back() = 1;
  return gamma;
}

Tags UtteranceGamma(const Utterance &utt) { return UtteranceGamma(utt.tokens.size()); }

std::vector<Tags> CorrectWindows(const std::vector<std::vector<std::string>> &utterances,
                                 const BoundaryPredictor &predictor) {
  const size_t m = utterances.size();
  std::vector<Tags> tags(m);
  if (m == 0) return tags;
  for (size_t i = 0; i < m; ++i) tags[i].assign(utterances[i].size(), 0);

  auto run = [&predictor](const std::vector<std::string> &tokens, const Tags &gamma) {
    Tags out = predictor.Predict(tokens, gamma);
    if (out.size() != tokens.size())
      throw DataError("predictor returned " + std::to_string(out.size()) +
                      " tags for " + std::to_string(tokens.size()) + " tokens");
    return out;
  };

  if (m == 1) {
    tags[0] = run(utterances[0], UtteranceGamma(utterances[0].size()));
  } else {
    for (size_t i = 0; i + 1 < m; ++i) {
      const auto &left = utterances[i], &right = utterances[i + 1];
      std::vector<std::string> window = left;
      window.insert(window.end(), right.begin(), right.end());
      Tags gamma = UtteranceGamma(left.size());
      Tags right_gamma = UtteranceGamma(right.size());
      gamma.insert(gamma.end(), right_gamma.begin(), right_gamma.end());
      Tags pred = run(window, gamma);
      for (size_t j = 0; j < left.size(); ++j) tags[i][j] |= pred[j];
      for (size_t j = 0; j < right.size(); ++j) tags[i + 1][j] |= pred[left.size() + j];
    }
  }
  tags.back().back() = 1;
  return tags;
}

std::vector<Tags> CorrectDocument(const std::vector<Utterance> &utterances,
                                  const BoundaryPredictor &predictor,
                                  const SubwordModel *subwords) {
  for (const auto &utt : utterances)
    if (utt.tokens.empty()) throw DataError("utterance in " + utt.doc_id + " has no tokens");
  std::vector<std::vector<std::string>> words(utterances.size());
  for (size_t i = 0; i < utterances.size(); ++i)
    for (const auto &t : utterances[i].tokens) words[i].push_back(Utf8Lower(t.text));
  if (subwords == nullptr) return CorrectWindows(words, predictor);

  std::vector<EncodedSequence> encoded;
  std::vector<std::vector<std::string>> pieces;
  for (const auto &w : words) {
    encoded.push_back(EncodeWords(w, *subwords));
    pieces.push_back(encoded.back().pieces);
  }
  std::vector<Tags> piece_tags = CorrectWindows(pieces, predictor);
  std::vector<Tags> out(utterances.size());
  for (size_t i = 0; i < utterances.size(); ++i)
    out[i] = ProjectToWords(encoded[i], piece_tags[i], words[i].size());
  return out;
}

SegmentedTranscript BuildTranscript(const std::vector<Utterance> &utterances,
                                    const std::vector<Tags> &tags) {
  if (tags.size() != utterances.size())
    throw DataError("tags do not cover every utterance");
  SegmentedTranscript out;
  if (!utterances.empty()) out.doc_id = utterances.front().doc_id;
  Segment current;
  bool open = false;
  for (size_t i = 0; i < utterances.size(); ++i) {
    const Utterance &utt = utterances[i];
    if (tags[i].size() != utt.tokens.size())
      throw DataError("tag count does not match utterance length");
    for (size_t j = 0; j < utt.tokens.size(); ++j) {
      if (!open) {
        current = Segment{{}, utt.tokens[j].start, utt.channel};
        open = true;
      }
      current.tokens.push_back(utt.tokens[j].text);
      if (tags[i][j] == 1) {
        out.segments.push_back(std::move(current));
        open = false;
      }
    }
  }
  if (open) out.segments.push_back(std::move(current));
  return out;
}

SegmentedTranscript MergeChannels(const SegmentedTranscript &a,
                                  const SegmentedTranscript &b) {
  if (a.doc_id != b.doc_id && !a.doc_id.empty() && !b.doc_id.empty())
    throw DataError("cannot merge channels of different documents: " + a.doc_id +
                    " vs " + b.doc_id);
  SegmentedTranscript out;
  out.doc_id = a.doc_id.empty() ? b.doc_id : a.doc_id;
  out.segments = a.segments;
  out.segments.insert(out.segments.end(), b.segments.begin(), b.segments.end());
  std::stable_sort(out.segments.begin(), out.segments.end(),
                   [](const Segment &x, const Segment &y) {
                     if (x.start != y.start) return x.start < y.start;
                     return x.channel < y.channel;
                   });
  return out;
}

namespace {

using ChannelGroups = std::map<std::string, std::map<int, std::vector<Utterance>>>;

ChannelGroups GroupByChannel(const std::vector<Utterance> &utterances) {
  ChannelGroups groups;
  for (const auto &utt : utterances) {
    if (utt.channel != 0 && utt.channel != 1)
      throw DataError(utt.doc_id + ": channel must be 0 or 1");
    groups[utt.doc_id][utt.channel].push_back(utt);
  }
  for (auto &[doc, channels] : groups)
    for (auto &[ch, utts] : channels)
      std::stable_sort(utts.begin(), utts.end(), [](const Utterance &x, const Utterance &y) {
        return x.tokens.front().start < y.tokens.front().start;
      });
  return groups;
}

template <typename PerChannel>
std::vector<SegmentedTranscript> ProcessGroups(const ChannelGroups &groups, int jobs,
                                               PerChannel per_channel) {
  std::vector<const std::map<int, std::vector<Utterance>> *> docs;
  for (const auto &[doc, channels] : groups) docs.push_back(&channels);
  std::vector<SegmentedTranscript> out(docs.size());
  ParallelFor(docs.size(), jobs, [&](size_t d) {
    SegmentedTranscript merged;
    bool first = true;
    for (const auto &[ch, utts] : *docs[d]) {
      SegmentedTranscript t = per_channel(utts);
      merged = first ? std::move(t) : MergeChannels(merged, t);
      first = false;
    }
    out[d] = std::move(merged);
  });
  return out;
}

}  // namespace

std::vector<SegmentedTranscript> CorrectAsr(const std::vector<Utterance> &utterances,
                                            const BoundaryPredictor &predictor,
                                            const SubwordModel *subwords, int jobs) {
  return ProcessGroups(GroupByChannel(utterances), jobs,
                       [&](const std::vector<Utterance> &utts) {
                         return BuildTranscript(utts,
                                                CorrectDocument(utts, predictor, subwords));
                       });
}

std::vector<SegmentedTranscript> AcousticTranscripts(
    const std::vector<Utterance> &utterances) {
  return ProcessGroups(GroupByChannel(utterances), 1, [](const std::vector<Utterance> &utts) {
    std::vector<Tags> tags;
    for (const auto &u : utts) tags.push_back(UtteranceGamma(u));
    return BuildTranscript(utts, tags);
  });
}

Utterance UtteranceFromJsonLine(const std::string &line) {
  Utterance utt;
  try {
    auto j = json::parse(line);
    utt.doc_id = j.at("doc_id").get<std::string>();
    utt.channel = j.value("channel", 0);
    for (const auto &tok : j.at("tokens")) {
      AsrToken t;
      t.text = tok.at("text").get<std::string>();
      t.start = tok.at("start").get<double>();
      t.duration = tok.value("dur", 0.0);
      utt.tokens.push_back(std::move(t));
    }
  } catch (const json::exception &e) {
    throw DataError(std::string("bad utterance record: ") + e.what());
  }
  if (utt.doc_id.empty()) throw DataError("utterance without doc_id");
  if (utt.tokens.empty()) throw DataError(utt.doc_id + ": utterance has no tokens");
  double last = -1.0;
  for (const auto &t : utt.tokens) {
    if (!std::isfinite(t.start) || !std::isfinite(t.duration) || t.start < 0 ||
        t.duration < 0)
      throw DataError(utt.doc_id + ": token times must be finite and non-negative");
    if (t.start < last) throw DataError(utt.doc_id + ": token start times decrease");
    last = t.start;
    if (SplitWhitespace(t.text).empty())
      throw DataError(utt.doc_id + ": empty token text");
  }
  return utt;
}

std::string UtteranceToJsonLine(const Utterance &utt) {
  ordered_json j;
  j["doc_id"] = utt.doc_id;
  j["channel"] = utt.channel;
  j["tokens"] = ordered_json::array();
  for (const auto &t : utt.tokens)
    j["tokens"].push_back({{"text", t.text}, {"start", t.start}, {"dur", t.duration}});
  return j.dump();
}

std::vector<Utterance> ReadUtterances(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<Utterance> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(UtteranceFromJsonLine(line));
  return out;
}

namespace {

std::string FormatSeconds(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string EmitSegments(const std::vector<SegmentedTranscript> &transcripts,
                         const std::string &format) {
  std::string out;
  if (format == "lines") {
    for (const auto &t : transcripts)
      for (const auto &seg : t.segments)
        out += t.doc_id + '\t' + FormatSeconds(seg.start) + '\t' + Join(seg.tokens, " ") + '\n';
  } else if (format == "jsonl") {
    for (const auto &t : transcripts) {
      ordered_json j;
      j["doc_id"] = t.doc_id;
      j["segments"] = ordered_json::array();
      for (const auto &seg : t.segments)
        j["segments"].push_back(
            {{"tokens", seg.tokens}, {"start", seg.start}, {"channel", seg.channel}});
      out += j.dump() + '\n';
    }
  } else {
    throw std::invalid_argument("unknown output format '" + format +
                                "' (expected lines|jsonl)");
  }
  return out;
}

std::vector<SegmentedTranscript> ParseTranscriptsJsonl(const std::string &text) {
  std::vector<SegmentedTranscript> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      SegmentedTranscript t;
      t.doc_id = j.at("doc_id").get<std::string>();
      for (const auto &s : j.at("segments")) {
        Segment seg;
        seg.tokens = s.at("tokens").get<std::vector<std::string>>();
        seg.start = s.at("start").get<double>();
        seg.channel = s.value("channel", 0);
        if (seg.tokens.empty()) throw DataError(t.doc_id + ": empty segment");
        t.segments.push_back(std::move(seg));
      }
      out.push_back(std::move(t));
    } catch (const json::exception &e) {
      throw DataError(std::string("bad transcript record: ") + e.what());
    }
  }
  return out;
}

std::vector<SegmentedTranscript> ReadTranscripts(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseTranscriptsJsonl(buf.str());
}

}  // namespace segcorr
