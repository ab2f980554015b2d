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

#ifndef RDP_LATTICE_H_
#define RDP_LATTICE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdp/common.h"

namespace rdp {

// One-dimensional nested lattices Lambda1 = MN delta Z, Lambda2 = N delta Z,
// Lambda3 = delta Z. Seed k selects the coset Lambda2 + k delta; the shaping
// region is the cell [-MN delta / 2, MN delta / 2) of Lambda1. Points are
// addressed by their fine index u (the point is u * delta).
class NestedLatticeSpec {
 public:
  NestedLatticeSpec(double delta, int n, int m);

  double delta() const { return delta_; }
  int n() const { return n_; }
  int m() const { return m_; }
  double coarse_step() const { return n_ * delta_; }
  double shaping_step() const { return static_cast<double>(m_) * n_ * delta_; }
  double region_lo() const { return -0.5 * shaping_step(); }
  double region_hi() const { return 0.5 * shaping_step(); }
  // Fine indices of the region: [first_index, first_index + M N).
  std::int64_t first_index() const;
  std::int64_t fine_count() const { return static_cast<std::int64_t>(m_) * n_; }

  // Level 1, 2 or 3 membership of the fine index u.
  bool Contains(int level, std::int64_t u) const;
  // Coset index u mod N in [0, N).
  int CosetOf(std::int64_t u) const;
  // Fine indices of coset k inside the shaping region, increasing.
  std::vector<std::int64_t> CosetPoints(int k) const;

 private:
  double delta_;
  int n_;
  int m_;
};

struct LatticeCodeword {
  std::int64_t fine_index = 0;
  double point = 0.0;
  bool clipped = false;  // x lay outside the shaping region
};

// Nearest point of coset k among those inside the shaping region (ties to the
// lower point). Inputs outside the region are clamped to it and flagged.
LatticeCodeword LatticeEncode(double x, int k, const NestedLatticeSpec& spec);

// Same on the torus R / Lambda1: distances are taken modulo the shaping step
// and the result is the in-region representative.
LatticeCodeword LatticeEncodeTorus(double x, int k, const NestedLatticeSpec& spec);

enum class LatticeSource {
  kUniform,   // uniform on the shaping region, torus metric
  kGaussian,  // N(0, sigma^2) conditioned on the shaping region, line metric
};

struct LatticeRunConfig {
  LatticeSource source = LatticeSource::kUniform;
  double sigma = 1.0;
  std::int64_t n_samples = 200000;
  std::uint64_t seed = 1;
  std::int64_t min_cell_samples = 200;
  // Keep per-sample source values and operational reconstruction errors.
  bool keep_samples = false;
};

struct LatticeTradeoffResult {
  PerceptionConstraint target = PerceptionConstraint::Unconstrained();
  double distortion = 0.0;
  double distortion_std_error = 0.0;
  double perception = 0.0;
  double mmse_distortion = 0.0;       // empirical conditional-mean decoder
  double mmse_std_error = 0.0;
  double mmse_perception = 0.0;       // squared W2(p_X, p_X~), quantile estimate
  double quantizer_mse = 0.0;         // error to the operational codeword
  double quantizer_std_error = 0.0;
  double alpha = 1.0;
  std::optional<double> analytic_distortion;  // uniform source only
  std::int64_t n_samples = 0;
  std::int64_t clipped = 0;  // rejected draws outside the shaping region
  std::uint64_t seed = 0;
  std::vector<double> sources;  // filled when keep_samples is set
  std::vector<double> errors;   // x - codeword
};

// Analytic distortion for the uniform source: (N delta)^2 / 12 plus the
// interpolation penalty against the fine-cell perception delta^2 / 12.
double LatticeUniformReference(const NestedLatticeSpec& spec,
                               PerceptionConstraint p);

// Seeded operational encoding, empirical MMSE decoding, fine-cell generator
// (stochastic inverse of encoding onto Lambda3) and interpolation with the
// weight set from the empirical squared W2 between X and X~. Throws
// InsufficientSamples when an occupied cell has fewer than min_cell_samples.
LatticeTradeoffResult LatticePipeline(const NestedLatticeSpec& spec,
                                      PerceptionConstraint p,
                                      const LatticeRunConfig& config);

struct LatticeCurve {
  NestedLatticeSpec spec;
  std::vector<LatticeTradeoffResult> points;
};

// D-vs-P curves for specs sharing the shaping step, all driven by the same
// seed. Throws ValidationError when the shaping steps differ.
std::vector<LatticeCurve> CosetSweep(std::span<const NestedLatticeSpec> specs,
                                     std::span<const PerceptionConstraint> grid,
                                     const LatticeRunConfig& config);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson test of independence on the bins_x x bins_y contingency table of
// the pairs, with equal-width bins over the given ranges. Empty rows and
// columns are dropped.
ChiSquareResult ChiSquareIndependence(std::span<const double> x,
                                      std::span<const double> y, int bins_x,
                                      int bins_y, double x_lo, double x_hi,
                                      double y_lo, double y_hi);

}  // namespace rdp

#endif  // RDP_LATTICE_H_
