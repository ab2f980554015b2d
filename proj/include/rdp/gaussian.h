// Copyright 2026 The rdp-lab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RDP_GAUSSIAN_H_
#define RDP_GAUSSIAN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdp/common.h"

namespace rdp {

// Rates in bits per sample. An empty common_rate means unlimited common
// randomness.
struct GaussianRdpQuery {
  double rate = 0.0;
  std::optional<double> common_rate = 0.0;
  PerceptionConstraint p = PerceptionConstraint::Unconstrained();
};

// Operational MSE 2^{-2R} of the seed-selected subcodebook.
double GaussianOperationalMse(double rate);

// Virtual MSE 2 - 2^{-2R} - 2 sqrt((1 - 2^{-2R})(1 - 2^{-2(R+C)})) over the
// full codebook (clamped at zero).
double GaussianVirtualMse(double rate, std::optional<double> common_rate);

// Distortion-rate-perception function of the unit-variance scalar Gaussian
// source. Throws ValidationError for negative or non-finite rates.
double DRcp(const GaussianRdpQuery& query);

struct SphereSimConfig {
  int n = 24;
  double rate = 0.5;
  double common_rate = 0.25;
  std::int64_t n_sources = 2000;
  std::uint64_t seed = 1;
};

inline constexpr std::int64_t kMaxSphereCodewords = std::int64_t{1} << 18;

struct SphereSimResult {
  std::int64_t codewords_per_seed = 0;  // floor(2^{nR})
  std::int64_t seeds = 0;               // floor(2^{nC})
  double operational_mse = 0.0;
  double operational_std_error = 0.0;
  double virtual_mse = 0.0;
  double virtual_std_error = 0.0;
  // Largest normalized inner product with a codeword, within one
  // subcodebook (averaged over seeds) and over the full codebook.
  double max_cosine = 0.0;
  double max_cosine_std_error = 0.0;
  double virtual_max_cosine = 0.0;
  // Samples where the virtual MSE exceeded the operational one (always 0).
  std::int64_t ordering_violations = 0;
};

// Random spherical codebook of floor(2^{nR}) x floor(2^{nC}) codewords on the
// sphere of radius sqrt(n (1 - 2^{-2R})), against sources uniform on the
// radius-sqrt(n) sphere. The operational MSE averages the per-seed minimum
// over all seeds. Throws UnsupportedConfiguration above kMaxSphereCodewords.
SphereSimResult SphereCodebookSim(const SphereSimConfig& config);

struct UniversalityTerm {
  PerceptionConstraint p = PerceptionConstraint::Unconstrained();
  double floor = 0.0;          // 2^{-2R}, fixed by the representation
  double interpolation = 0.0;  // [(sqrt(virtual mse) - sqrt(P))_+]^2
  double distortion = 0.0;
};

struct GaussianUniversalityReport {
  std::vector<UniversalityTerm> terms;
  double threshold = 0.0;  // P beyond which the interpolation term vanishes
  bool floor_constant = true;
};

// Splits D(R, C, P) into the representation floor and the interpolation
// term across a grid of perception levels.
GaussianUniversalityReport AsymptoticUniversalityCheck(
    double rate, std::optional<double> common_rate,
    std::span<const PerceptionConstraint> grid);

}  // namespace rdp

#endif  // RDP_GAUSSIAN_H_
