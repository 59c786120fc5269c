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


// segcorr/resegment.h

// Re-segmentation of ASR output. Each channel of a document is corrected on
// its own: the tagger sees consecutive utterance pairs, the two predictions
// that every interior utterance receives are OR-ed, and the document's last
// token always closes a segment. Channels are then interleaved by start time.

#ifndef SEGCORR_RESEGMENT_H_
#define SEGCORR_RESEGMENT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "segcorr/corpus.h"
#include "segcorr/subword.h"
#include "segcorr/tagger.h"

namespace segcorr {

struct AsrToken {
  std::string text;
  double start = 0.0;
  double duration = 0.0;
};

struct Utterance {
  std::string doc_id;
  int channel = 0;
  std::vector<AsrToken> tokens;

  std::vector<std::string> Words() const;
};

struct Segment {
  std::vector<std::string> tokens;
  double start = 0.0;
  int channel = 0;

  bool operator==(const Segment &) const = default;
};

struct SegmentedTranscript {
  std::string doc_id;
  std::vector<Segment> segments;

  bool operator==(const SegmentedTranscript &) const = default;
};

/// Anything that maps a token window and its acoustic tags to boundary tags
/// of the same length.
class BoundaryPredictor {
 public:
  virtual ~BoundaryPredictor() = default;
  virtual Tags Predict(const std::vector<std::string> &tokens,
                       const Tags &gamma) const = 0;
};

class TaggerPredictor : public BoundaryPredictor {
 public:
  TaggerPredictor(const TaggerModel &model, double threshold)
      : model_(model), threshold_(threshold) {}
  Tags Predict(const std::vector<std::string> &tokens,
               const Tags &gamma) const override {
    return model_.Predict(tokens, gamma, threshold_);
  }

 private:
  const TaggerModel &model_;
  double threshold_;
};

/// Returns the acoustic tags unchanged.
class EchoGammaPredictor : public BoundaryPredictor {
 public:
  Tags Predict(const std::vector<std::string> &,
               const Tags &gamma) const override {
    return gamma;
  }
};

/// [0, ..., 0, 1] of the given length. Throws on zero length.
Tags UtteranceGamma(size_t length);
Tags UtteranceGamma(const Utterance &utt);

/// Windowed correction over pre-tokenized utterances. Window i covers
/// utterances i and i+1; a lone utterance is predicted by itself. Returns one
/// tag vector per utterance, with the final position of the last utterance
/// forced to 1.
std::vector<Tags> CorrectWindows(const std::vector<std::vector<std::string>> &utterances,
                                 const BoundaryPredictor &predictor);

/// Word-level tags for the utterances of one (doc, channel). With a subword
/// model, words are encoded first, windows run over pieces, and each word
/// takes its last piece's tag. Without one, words go to the predictor as-is.
std::vector<Tags> CorrectDocument(const std::vector<Utterance> &utterances,
                                  const BoundaryPredictor &predictor,
                                  const SubwordModel *subwords);

/// Cuts the utterances' tokens after every tagged word.
SegmentedTranscript BuildTranscript(const std::vector<Utterance> &utterances,
                                    const std::vector<Tags> &tags);

/// Union of both channels' segments, stably ordered by (start, channel).
SegmentedTranscript MergeChannels(const SegmentedTranscript &a,
                                  const SegmentedTranscript &b);

/// Groups utterances by document and channel, corrects every channel and
/// merges the channels. Output is sorted by doc_id.
std::vector<SegmentedTranscript> CorrectAsr(const std::vector<Utterance> &utterances,
                                            const BoundaryPredictor &predictor,
                                            const SubwordModel *subwords,
                                            int jobs = 1);

/// Acoustic segmentation as-is: one segment per utterance, channels merged.
std::vector<SegmentedTranscript> AcousticTranscripts(
    const std::vector<Utterance> &utterances);

std::vector<Utterance> ReadUtterances(const std::filesystem::path &path);
Utterance UtteranceFromJsonLine(const std::string &line);
std::string UtteranceToJsonLine(const Utterance &utt);

/// "lines": doc_id<TAB>start<TAB>space-joined tokens, one segment per line.
/// "jsonl": one transcript object per line.
std::string EmitSegments(const std::vector<SegmentedTranscript> &transcripts,
                         const std::string &format);
std::vector<SegmentedTranscript> ParseTranscriptsJsonl(const std::string &text);
std::vector<SegmentedTranscript> ReadTranscripts(const std::filesystem::path &path);

}  // namespace segcorr

#endif  // SEGCORR_RESEGMENT_H_
