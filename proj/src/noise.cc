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


// segcorr/noise.cc

#include "segcorr/noise.h"

#include <stdexcept>

namespace segcorr {

NoiseMode ParseNoiseMode(const std::string &name) {
  if (name == "both") return NoiseMode::kBoth;
  if (name == "under_only") return NoiseMode::kUnderOnly;
  if (name == "over_only") return NoiseMode::kOverOnly;
  if (name == "none") return NoiseMode::kNone;
  throw std::invalid_argument("unknown noise mode '" + name +
                              "' (expected both|under_only|over_only|none)");
}

std::string NoiseModeName(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kBoth: return "both";
    case NoiseMode::kUnderOnly: return "under_only";
    case NoiseMode::kOverOnly: return "over_only";
    case NoiseMode::kNone: return "none";
  }
  return "both";
}

void NoiseParams::Validate() const {
  if (!(under_rate >= 0.0 && under_rate <= 1.0) ||
      !(over_rate >= 0.0 && over_rate <= 1.0))
    throw std::invalid_argument("noise rates must lie in [0, 1]");
}

double NoiseParams::effective_under_rate() const {
  return (mode == NoiseMode::kBoth || mode == NoiseMode::kUnderOnly) ? under_rate
                                                                      : 0.0;
}

double NoiseParams::effective_over_rate() const {
  return (mode == NoiseMode::kBoth || mode == NoiseMode::kOverOnly) ? over_rate
                                                                     : 0.0;
}

namespace {

void CheckDraws(const Tags &labels, std::span<const double> draws) {
  if (draws.size() != labels.size())
    throw std::invalid_argument("need one draw per position");
}

void CheckRate(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw std::invalid_argument("noise rates must lie in [0, 1]");
}

}  // namespace

Tags ApplyUnderSegmentation(const Tags &labels, double under_rate,
                            std::span<const double> draws) {
  CheckDraws(labels, draws);
  CheckRate(under_rate);
  Tags out = labels;
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i] == 1 && draws[i] < under_rate) out[i] = 0;
  return out;
}

Tags ApplyOverSegmentation(const Tags &labels, double over_rate,
                           std::span<const double> draws) {
  CheckDraws(labels, draws);
  CheckRate(over_rate);
  Tags out = labels;
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i] == 0 && draws[i] >= 1.0 - over_rate) out[i] = 1;
  return out;
}

Tags SynthesizeGamma(const Tags &labels, const NoiseParams &params,
                     std::span<const double> draws) {
  CheckDraws(labels, draws);
  params.Validate();
  if (params.mode == NoiseMode::kNone) return labels;
  const double drop = params.effective_under_rate();
  const double insert = params.effective_over_rate();
  Tags gamma(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    // Keep a true boundary with probability 1 - drop.
    gamma[i] = labels[i] == 1 ? (draws[i] >= drop ? 1 : 0)
                              : (draws[i] >= 1.0 - insert ? 1 : 0);
  }
  return gamma;
}

std::vector<double> DrawUniforms(size_t n, Rng &rng) {
  std::vector<double> draws(n);
  for (auto &u : draws) u = rng.Uniform();
  return draws;
}

Tags ApplyUnderSegmentation(const Tags &labels, double under_rate, Rng &rng) {
  return ApplyUnderSegmentation(labels, under_rate, DrawUniforms(labels.size(), rng));
}

Tags ApplyOverSegmentation(const Tags &labels, double over_rate, Rng &rng) {
  return ApplyOverSegmentation(labels, over_rate, DrawUniforms(labels.size(), rng));
}

Tags SynthesizeGamma(const Tags &labels, const NoiseParams &params, Rng &rng) {
  return SynthesizeGamma(labels, params, DrawUniforms(labels.size(), rng));
}

void SynthesizeCorpus(std::vector<Instance> &instances, const NoiseParams &params,
                      std::string_view purpose) {
  params.Validate();
  for (auto &inst : instances) {
    std::string label = std::string(purpose) + ":" + inst.doc_id + ":" +
                        std::to_string(inst.index);
    Rng rng(DeriveSeed(params.seed, label));
    inst.gamma = SynthesizeGamma(inst.labels, params, rng);
  }
}

}  // namespace segcorr
