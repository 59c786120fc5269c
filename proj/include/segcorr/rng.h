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


// segcorr/rng.h

#ifndef SEGCORR_RNG_H_
#define SEGCORR_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace segcorr {

/// Derives a child seed from a master seed and a purpose label, so that every
/// random stream in the toolkit is addressable by name (e.g. "chunk:doc42").
/// FNV-1a over the label followed by a splitmix64 finalizer.
uint64_t DeriveSeed(uint64_t master_seed, std::string_view label);

/// Deterministic random source. Wraps mt19937_64, whose output sequence is
/// fixed by the standard; the distributions below are implemented here
/// because the std:: distributions are not portable across library vendors.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform();

  // Uniform integer on [lo, hi], inclusive. Requires lo <= hi.
  int64_t UniformInt(int64_t lo, int64_t hi);

  // Uniform on [lo, hi).
  double UniformReal(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  template <typename T>
  void Shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace segcorr

#endif  // SEGCORR_RNG_H_
