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


// tests/test_util.h

#ifndef SEGCORR_TESTS_TEST_UTIL_H_
#define SEGCORR_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "segcorr/corpus.h"
#include "segcorr/rng.h"

namespace segcorr::testing {

// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("segcorr_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Tokens drawn from a small lexicon plus "stop"; the label is 1 exactly on
// "stop" and on the final token.
inline Instance StopGrammarInstance(Rng &rng, const std::string &doc_id, int64_t index,
                                    int length) {
  static const std::vector<std::string> kWords = {"a", "b", "c", "d", "e", "f", "g", "h"};
  Instance inst;
  inst.doc_id = doc_id;
  inst.index = index;
  for (int i = 0; i < length; ++i) {
    bool stop = i > 0 && rng.Uniform() < 0.25;
    inst.tokens.push_back(stop ? "stop" : kWords[rng.UniformInt(0, 7)]);
    inst.labels.push_back(stop ? 1 : 0);
  }
  inst.labels.back() = 1;
  return inst;
}

inline std::vector<Instance> StopGrammarCorpus(uint64_t seed, int count, int min_len,
                                               int max_len) {
  Rng rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i)
    out.push_back(StopGrammarInstance(rng, "g" + std::to_string(seed), i,
                                      static_cast<int>(rng.UniformInt(min_len, max_len))));
  return out;
}

}  // namespace segcorr::testing

#endif  // SEGCORR_TESTS_TEST_UTIL_H_
