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


// segcorr/noise.h

#ifndef SEGCORR_NOISE_H_
#define SEGCORR_NOISE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segcorr/corpus.h"
#include "segcorr/rng.h"

namespace segcorr {

enum class NoiseMode { kBoth, kUnderOnly, kOverOnly, kNone };

NoiseMode ParseNoiseMode(const std::string &name);
std::string NoiseModeName(NoiseMode mode);

struct NoiseParams {
  double under_rate = 0.25;  // P(drop a true boundary)
  double over_rate = 0.25;   // P(insert a spurious boundary)
  NoiseMode mode = NoiseMode::kBoth;
  uint64_t seed = 0;

  void Validate() const;
  double effective_under_rate() const;
  double effective_over_rate() const;
};

// Each position consumes exactly one uniform draw u_i in [0, 1). A boundary
// is dropped when u_i < under_rate; a non-boundary becomes one when
// u_i >= 1 - over_rate. Drops and insertions use opposite ends of the unit
// interval, so over-segmenting the output of under-segmentation with the
// same draws gives SynthesizeGamma exactly whenever the two rates sum to at
// most 1.

Tags ApplyUnderSegmentation(const Tags &labels, double under_rate,
                            std::span<const double> draws);
Tags ApplyOverSegmentation(const Tags &labels, double over_rate,
                           std::span<const double> draws);
Tags SynthesizeGamma(const Tags &labels, const NoiseParams &params,
                     std::span<const double> draws);

Tags ApplyUnderSegmentation(const Tags &labels, double under_rate, Rng &rng);
Tags ApplyOverSegmentation(const Tags &labels, double over_rate, Rng &rng);
Tags SynthesizeGamma(const Tags &labels, const NoiseParams &params, Rng &rng);

std::vector<double> DrawUniforms(size_t n, Rng &rng);

/// Fills `gamma` for every instance from its own stream, seeded by
/// (params.seed, doc_id, index) so the result is independent of order.
void SynthesizeCorpus(std::vector<Instance> &instances, const NoiseParams &params,
                      std::string_view purpose = "noise");

}  // namespace segcorr

#endif  // SEGCORR_NOISE_H_
