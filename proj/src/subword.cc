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


// segcorr/subword.cc

#include "segcorr/subword.h"

#include <fstream>
#include <limits>
#include <sstream>

#include "segcorr/errors.h"
#include "segcorr/text.h"

namespace segcorr {

namespace {

struct WordEntry {
  std::vector<std::string> symbols;
  int64_t freq;
};

// Pair statistics for incremental BPE learning.
class PairStats {
 public:
  using Merge = SubwordModel::Merge;

  void Add(const Merge &pair, int64_t delta, size_t word) {
    int64_t &count = counts_[pair];
    if (count > 0) ordered_.erase({-count, pair});
    count += delta;
    if (count > 0) ordered_.insert({-count, pair});
    if (delta > 0) where_[pair].insert(word);
  }

  void AddWord(const WordEntry &w, size_t idx, int64_t sign) {
    for (size_t i = 0; i + 1 < w.symbols.size(); ++i)
      Add({w.symbols[i], w.symbols[i + 1]}, sign * w.freq, idx);
  }

  bool empty() const { return ordered_.empty(); }
  int64_t best_count() const { return -ordered_.begin()->first; }
  const Merge &best() const { return ordered_.begin()->second; }
  std::set<size_t> TakeWords(const Merge &pair) {
    auto it = where_.find(pair);
    if (it == where_.end()) return {};
    std::set<size_t> words = std::move(it->second);
    where_.erase(it);
    return words;
  }

 private:
  std::map<Merge, int64_t> counts_;
  std::set<std::pair<int64_t, Merge>> ordered_;
  std::map<Merge, std::set<size_t>> where_;
};

void ApplyMerge(std::vector<std::string> &symbols, const SubwordModel::Merge &m) {
  std::vector<std::string> merged;
  merged.reserve(symbols.size());
  for (size_t i = 0; i < symbols.size(); ++i) {
    if (i + 1 < symbols.size() && symbols[i] == m.first &&
        symbols[i + 1] == m.second) {
      merged.push_back(symbols[i] + symbols[i + 1]);
      ++i;
    } else {
      merged.push_back(symbols[i]);
    }
  }
  symbols = std::move(merged);
}

}  // namespace

void SubwordModel::IndexMerges() {
  rank_.clear();
  for (size_t i = 0; i < merges_.size(); ++i) rank_.emplace(merges_[i], i);
}

SubwordModel SubwordModel::Train(const std::map<std::string, int64_t> &word_counts,
                                 int merge_count) {
  if (merge_count < 0) throw std::invalid_argument("merge_count must be >= 0");
  if (word_counts.empty()) throw DataError("empty corpus");
  SubwordModel model;
  std::vector<WordEntry> words;
  words.reserve(word_counts.size());
  for (const auto &[word, freq] : word_counts) {
    WordEntry entry{Utf8Chars(word), freq};
    model.alphabet_.insert(entry.symbols.begin(), entry.symbols.end());
    words.push_back(std::move(entry));
  }
  PairStats stats;
  for (size_t i = 0; i < words.size(); ++i) stats.AddWord(words[i], i, +1);

  while (static_cast<int>(model.merges_.size()) < merge_count && !stats.empty() &&
         stats.best_count() >= 2) {
    Merge best = stats.best();
    model.merges_.push_back(best);
    for (size_t idx : stats.TakeWords(best)) {
      WordEntry &w = words[idx];
      stats.AddWord(w, idx, -1);
      ApplyMerge(w.symbols, best);
      stats.AddWord(w, idx, +1);
    }
  }
  model.IndexMerges();
  return model;
}

SubwordModel SubwordModel::Train(const std::vector<SubtitleDocument> &corpus,
                                 int merge_count) {
  std::map<std::string, int64_t> counts;
  for (const auto &doc : corpus)
    for (const auto &token : ParseSubtitles(doc).tokens) ++counts[token];
  if (counts.empty()) throw DataError("empty corpus");
  return Train(counts, merge_count);
}

std::vector<std::string> SubwordModel::Encode(const std::string &word) const {
  std::vector<std::string> symbols = Utf8Chars(word);
  if (symbols.empty()) return {};
  for (const auto &c : symbols)
    if (!alphabet_.count(c)) return {kUnknown};
  while (symbols.size() > 1) {
    size_t best_rank = std::numeric_limits<size_t>::max();
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = rank_.find({symbols[i], symbols[i + 1]});
      if (it != rank_.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == std::numeric_limits<size_t>::max()) break;
    ApplyMerge(symbols, merges_[best_rank]);
  }
  for (size_t i = 0; i + 1 < symbols.size(); ++i) symbols[i] += kContinuation;
  return symbols;
}

std::vector<std::string> SubwordModel::Decode(const std::vector<std::string> &pieces) {
  const std::string marker = kContinuation;
  std::vector<std::string> words;
  std::string current;
  bool open = false;
  for (const auto &piece : pieces) {
    if (piece.size() >= marker.size() &&
        piece.compare(piece.size() - marker.size(), marker.size(), marker) == 0) {
      current += piece.substr(0, piece.size() - marker.size());
      open = true;
    } else {
      current += piece;
      words.push_back(std::move(current));
      current.clear();
      open = false;
    }
  }
  if (open) words.push_back(std::move(current));
  return words;
}

std::set<std::string> SubwordModel::Vocabulary() const {
  std::set<std::string> vocab = alphabet_;
  for (const auto &m : merges_) vocab.insert(m.first + m.second);
  return vocab;
}

void SubwordModel::Save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "#merges " << merges_.size() << '\n';
  for (const auto &m : merges_) out << m.first << ' ' << m.second << '\n';
  out << "#alphabet " << alphabet_.size() << '\n';
  for (const auto &c : alphabet_) out << c << '\n';
}

SubwordModel SubwordModel::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  SubwordModel model;
  std::string line, tag;
  size_t count = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> tag >> count) ||
      tag != "#merges")
    throw DataError(path.string() + ": missing '#merges <count>' header");
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw DataError(path.string() + ": truncated merges");
    std::istringstream fields(line);
    Merge m;
    if (!(fields >> m.first >> m.second))
      throw DataError(path.string() + ": bad merge line '" + line + "'");
    model.merges_.push_back(std::move(m));
  }
  if (std::getline(in, line)) {
    size_t n_chars = 0;
    if (!(std::istringstream(line) >> tag >> n_chars) || tag != "#alphabet")
      throw DataError(path.string() + ": expected '#alphabet <count>'");
    for (size_t i = 0; i < n_chars; ++i) {
      if (!std::getline(in, line) || line.empty())
        throw DataError(path.string() + ": truncated alphabet");
      model.alphabet_.insert(line);
    }
  } else {
    // Merge-only files: the alphabet is whatever the merges mention.
    for (const auto &m : model.merges_)
      for (const auto *side : {&m.first, &m.second})
        for (auto &c : Utf8Chars(*side)) model.alphabet_.insert(c);
  }
  model.IndexMerges();
  return model;
}

EncodedSequence EncodeWords(const std::vector<std::string> &words,
                            const SubwordModel &sw) {
  EncodedSequence seq;
  for (size_t w = 0; w < words.size(); ++w) {
    std::vector<std::string> pieces = sw.Encode(words[w]);
    if (pieces.empty()) pieces.push_back(SubwordModel::kUnknown);
    for (auto &p : pieces) {
      seq.pieces.push_back(std::move(p));
      seq.word_of.push_back(w);
    }
  }
  return seq;
}

Instance EncodeInstance(const Instance &inst, const SubwordModel &sw) {
  EncodedSequence seq = EncodeWords(inst.tokens, sw);
  Instance out;
  out.doc_id = inst.doc_id;
  out.index = inst.index;
  out.tokens = std::move(seq.pieces);
  out.labels.assign(out.tokens.size(), 0);
  if (inst.has_gamma()) out.gamma.assign(out.tokens.size(), 0);
  for (size_t k = 0; k < out.tokens.size(); ++k) {
    size_t w = seq.word_of[k];
    bool last = k + 1 == out.tokens.size() || seq.word_of[k + 1] != w;
    if (!last) continue;
    out.labels[k] = inst.labels[w];
    if (inst.has_gamma()) out.gamma[k] = inst.gamma[w];
  }
  return out;
}

Tags ProjectToWords(const EncodedSequence &seq, const Tags &piece_tags,
                    size_t word_count) {
  if (piece_tags.size() != seq.pieces.size())
    throw DataError("piece tags do not match the encoded sequence");
  Tags words(word_count, 0);
  for (size_t k = 0; k < piece_tags.size(); ++k) {
    bool last = k + 1 == piece_tags.size() || seq.word_of[k + 1] != seq.word_of[k];
    if (last) words[seq.word_of[k]] = piece_tags[k];
  }
  return words;
}

}  // namespace segcorr
