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


// segcorr/subword.h

#ifndef SEGCORR_SUBWORD_H_
#define SEGCORR_SUBWORD_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "segcorr/corpus.h"

namespace segcorr {

/// Byte-pair encoding over UTF-8 characters, learned within word boundaries.
/// Encoded pieces carry a trailing "@@" when the word continues, so
/// "market" may come out as {"mar@@", "ket"}.
class SubwordModel {
 public:
  using Merge = std::pair<std::string, std::string>;

  static constexpr const char *kUnknown = "<unk>";
  static constexpr const char *kContinuation = "@@";
  static constexpr int kDefaultMergeCount = 32000;

  SubwordModel() = default;

  /// Learns up to `merge_count` merges from word frequencies. The most
  /// frequent pair wins; equal counts go to the lexicographically smallest
  /// pair. Learning stops early once no pair occurs at least twice.
  static SubwordModel Train(const std::map<std::string, int64_t> &word_counts,
                            int merge_count);

  /// Lowercases and tokenizes the documents, then trains on the word counts.
  /// Throws DataError("empty corpus") when no words are found.
  static SubwordModel Train(const std::vector<SubtitleDocument> &corpus,
                            int merge_count);

  /// Pieces for one word. A word with any character outside the alphabet
  /// becomes the single piece kUnknown.
  std::vector<std::string> Encode(const std::string &word) const;

  /// Rejoins pieces into words by following continuation markers.
  static std::vector<std::string> Decode(const std::vector<std::string> &pieces);

  const std::vector<Merge> &merges() const { return merges_; }
  const std::set<std::string> &alphabet() const { return alphabet_; }
  /// Alphabet plus every merged symbol (without continuation markers).
  std::set<std::string> Vocabulary() const;

  /// "#merges <count>" header, one "left right" line per merge, then an
  /// "#alphabet <count>" section with one character per line.
  void Save(const std::filesystem::path &path) const;
  static SubwordModel Load(const std::filesystem::path &path);

 private:
  std::vector<Merge> merges_;
  std::map<Merge, size_t> rank_;
  std::set<std::string> alphabet_;

  void IndexMerges();
};

/// Subword view of a word sequence: `word_of[k]` is the word that piece k
/// came from.
struct EncodedSequence {
  std::vector<std::string> pieces;
  std::vector<size_t> word_of;
};

EncodedSequence EncodeWords(const std::vector<std::string> &words,
                            const SubwordModel &sw);

/// Expands every word into its pieces. A word's label (and gamma) lands on
/// its last piece; the other pieces get 0.
Instance EncodeInstance(const Instance &inst, const SubwordModel &sw);

/// Word tags from piece tags: a word is tagged iff its last piece is.
Tags ProjectToWords(const EncodedSequence &seq, const Tags &piece_tags,
                    size_t word_count);

}  // namespace segcorr

#endif  // SEGCORR_SUBWORD_H_
