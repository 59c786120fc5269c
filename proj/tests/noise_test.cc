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


// tests/noise_test.cc

#include <vector>

#include "doctest.h"
#include "segcorr/noise.h"
#include "segcorr/rng.h"

using namespace segcorr;

namespace {

const Tags kReference = {1, 0, 0, 0, 0, 0, 1, 1};

// Draws that flip exactly the listed 0-based positions at rate 0.25: low
// draws drop boundaries, high draws insert them, 0.5 does neither.
std::vector<double> FlipAt(std::initializer_list<size_t> drops,
                           std::initializer_list<size_t> inserts) {
  std::vector<double> draws(kReference.size(), 0.5);
  for (size_t p : drops) draws[p] = 0.1;
  for (size_t p : inserts) draws[p] = 0.9;
  return draws;
}

}  // namespace

TEST_CASE("under-segmentation drops the seventh boundary") {
  CHECK(ApplyUnderSegmentation(kReference, 0.25, FlipAt({6}, {})) == Tags{1, 0, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("over-segmentation inserts at the fourth and sixth positions") {
  CHECK(ApplyOverSegmentation(kReference, 0.25, FlipAt({}, {3, 5})) ==
        Tags{1, 0, 0, 1, 0, 1, 1, 1});
}

TEST_CASE("combined noise") {
  NoiseParams params;
  CHECK(SynthesizeGamma(kReference, params, FlipAt({6}, {3, 5})) == Tags{1, 0, 0, 1, 0, 1, 0, 1});
}

TEST_CASE("extreme rates") {
  Rng rng(1);
  CHECK(ApplyUnderSegmentation(kReference, 0.0, rng) == kReference);
  CHECK(ApplyUnderSegmentation(kReference, 1.0, rng) == Tags(8, 0));
  CHECK(ApplyOverSegmentation(kReference, 0.0, rng) == kReference);
  CHECK(ApplyOverSegmentation(kReference, 1.0, rng) == Tags(8, 1));
  NoiseParams zero;
  zero.under_rate = zero.over_rate = 0.0;
  CHECK(SynthesizeGamma(kReference, zero, rng) == kReference);
}

TEST_CASE("a draw only triggers the matching flip") {
  std::vector<double> low(8, 0.1), high(8, 0.9);
  CHECK(ApplyOverSegmentation(kReference, 0.25, low) == kReference);
  CHECK(ApplyUnderSegmentation(kReference, 0.25, high) == kReference);
}

TEST_CASE("modes switch off one side") {
  NoiseParams params;
  params.under_rate = params.over_rate = 1.0;
  std::vector<double> draws(8, 0.5);
  params.mode = NoiseMode::kNone;
  CHECK(SynthesizeGamma(kReference, params, draws) == kReference);
  params.mode = NoiseMode::kUnderOnly;
  CHECK(SynthesizeGamma(kReference, params, draws) == Tags(8, 0));
  params.mode = NoiseMode::kOverOnly;
  CHECK(SynthesizeGamma(kReference, params, draws) == Tags(8, 1));
}

TEST_CASE("mode names round-trip") {
  for (auto mode : {NoiseMode::kBoth, NoiseMode::kUnderOnly, NoiseMode::kOverOnly, NoiseMode::kNone})
    CHECK(ParseNoiseMode(NoiseModeName(mode)) == mode);
  CHECK_THROWS_AS(ParseNoiseMode("sideways"), std::invalid_argument);
}

TEST_CASE("rates outside [0,1] are rejected") {
  NoiseParams params;
  params.under_rate = -0.1;
  CHECK_THROWS_AS(params.Validate(), std::invalid_argument);
  params.under_rate = 0.2;
  params.over_rate = 1.5;
  CHECK_THROWS_AS(params.Validate(), std::invalid_argument);
  CHECK_THROWS_AS(ApplyUnderSegmentation(kReference, 2.0, FlipAt({}, {})), std::invalid_argument);
}

TEST_CASE("draw count must match the label count") {
  std::vector<double> short_draws(3, 0.5);
  CHECK_THROWS_AS(ApplyOverSegmentation(kReference, 0.25, short_draws), std::invalid_argument);
}

TEST_CASE("corpus synthesis is seeded and leaves labels alone") {
  std::vector<Instance> a = {{"d", 0, {"a", "b", "c"}, {}, {0, 1, 1}},
                             {"e", 0, {"x", "y"}, {}, {0, 1}}};
  auto b = a;
  NoiseParams params;
  params.seed = 11;
  SynthesizeCorpus(a, params);
  SynthesizeCorpus(b, params);
  CHECK(a == b);
  for (const auto &inst : a) {
    CHECK(inst.gamma.size() == inst.labels.size());
  }
  CHECK(a[0].labels == Tags{0, 1, 1});

  params.mode = NoiseMode::kNone;
  SynthesizeCorpus(a, params);
  CHECK(a[0].gamma == a[0].labels);
  CHECK(a[1].gamma == a[1].labels);
}

TEST_CASE("the same instance gets the same gamma regardless of corpus order") {
  Instance x{"d", 4, {"a", "b", "c", "d", "e", "f"}, {}, {0, 0, 1, 0, 0, 1}};
  Instance y{"q", 0, {"a"}, {}, {1}};
  std::vector<Instance> first = {x, y}, second = {y, x};
  NoiseParams params;
  params.under_rate = params.over_rate = 0.5;
  params.seed = 3;
  SynthesizeCorpus(first, params);
  SynthesizeCorpus(second, params);
  CHECK(first[0].gamma == second[1].gamma);
}
