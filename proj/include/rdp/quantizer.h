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

#ifndef RDP_QUANTIZER_H_
#define RDP_QUANTIZER_H_

#include <span>
#include <vector>

#include "rdp/common.h"
#include "rdp/transport.h"

namespace rdp {

// Largest source support and codebook size for exhaustive partition search.
inline constexpr std::size_t kMaxExhaustiveSupport = 12;
inline constexpr int kMaxExhaustiveCells = 4;

// Deterministic quantizer of a finite source: partition[i] is the cell of
// atom i; centroids are the weight-conditional means of the cells (zero for
// empty cells, which carry zero weight).
struct QuantizerDesign {
  int dim = 1;
  std::vector<int> partition;
  std::vector<double> centroids;  // cells x dim, row-major
  std::vector<double> cell_weights;
  double mse = 0.0;

  int cells() const { return static_cast<int>(cell_weights.size()); }
  std::span<const double> centroid(int c) const {
    return {centroids.data() + static_cast<std::size_t>(c) * dim,
            static_cast<std::size_t>(dim)};
  }
  // Distribution of the MMSE reconstruction (nonempty cells only).
  FiniteDistribution OutputDistribution() const;
};

// Conditional means and MSE for a given assignment of atoms to `cells` cells.
QuantizerDesign DesignFromAssignment(const FiniteDistribution& source,
                                     std::vector<int> partition, int cells);

// Globally MSE-optimal partition into at most m cells by enumeration of set
// partitions; ties resolve to the lexicographically smallest assignment.
// Throws RegimeExceeded beyond kMaxExhaustiveSupport atoms or
// kMaxExhaustiveCells cells.
QuantizerDesign OptimalMmseQuantizer(const FiniteDistribution& source, int m);

// Calls fn(assignment, blocks) for every set partition of `size` atoms into at
// most `max_blocks` blocks, as restricted growth strings in lexicographic
// order.
template <class Fn>
void ForEachPartition(int size, int max_blocks, Fn fn) {
  std::vector<int> a(size, 0);
  std::vector<int> top(size, 0);  // max label used in a[0..i]
  while (true) {
    fn(static_cast<const std::vector<int>&>(a), (size == 0 ? 0 : top[size - 1] + 1));
    int i = size - 1;
    while (i > 0 && (a[i] > top[i - 1] || a[i] + 1 >= max_blocks)) --i;
    if (i <= 0) return;
    ++a[i];
    top[i] = std::max(top[i - 1], a[i]);
    for (int t = i + 1; t < size; ++t) {
      a[t] = 0;
      top[t] = top[i];
    }
  }
}

struct Prop1Check {
  double mse;
  double w2sq;
  bool equal;
};

// Compares the optimal MSE with the exact squared W2 between the source and
// the optimal reconstruction distribution (equality at 1e-9).
Prop1Check VerifyProp1(const FiniteDistribution& source, int m);

struct PerfectPerceptionCheck {
  double twice_mse;         // 2 x optimal MSE
  double posterior_sample;  // E||Z - Z'||^2 of optimal encoder + posterior sampling
  bool agree;               // within 1e-9
};

// Minimum distortion under perfect perception, computed from the optimal
// MSE and by explicit posterior-sampling construction.
PerfectPerceptionCheck PerfectPerceptionMinDistortion(
    const FiniteDistribution& source, int m);

enum class GeneratorKind { kOptimalTransport, kPosteriorSampling };

// Result of interpolating between the MMSE estimate and a perceptually
// perfect sample X' drawn from `generator`: a cells x atoms row-stochastic
// matrix giving the law of X' for each cell. All values are exact sums over
// the finite supports.
struct DecoderEvaluation {
  double transport_cost = 0.0;  // E||X' - X~||^2
  double distortion = 0.0;      // E||X - X^||^2
  double perception = 0.0;      // exact squared W2(p_X, p_X^)
};
DecoderEvaluation EvaluateInterpolationDecoder(
    const FiniteDistribution& source, const QuantizerDesign& design,
    std::span<const double> generator, double alpha);

// Cells x atoms generator laws: the optimal plan from p_X~ to p_X read
// through X~, or the posterior of the source given the cell.
std::vector<double> OptimalTransportGenerator(const FiniteDistribution& source,
                                              const QuantizerDesign& design);
std::vector<double> PosteriorGenerator(const FiniteDistribution& source,
                                       const QuantizerDesign& design);

struct PipelineResult {
  double mmse_distortion = 0.0;
  double perception_of_mmse = 0.0;  // squared W2(p_X, p_X~)
  double alpha = 1.0;
  double achieved_distortion = 0.0;
  double achieved_perception = 0.0;
  GeneratorKind generator_kind = GeneratorKind::kOptimalTransport;
};

// MMSE -> generator -> interpolator chain for a fixed encoder. The weight is
// min(1, sqrt(P / c)) with c the generator's transport cost: the squared W2
// for the optimal-transport generator, the MMSE distortion for posterior
// sampling.
PipelineResult InterpolationPipeline(const FiniteDistribution& source,
                                     std::span<const int> encoder,
                                     PerceptionConstraint p,
                                     GeneratorKind kind);

// MSE of the conditional-mean decoder for a stochastic encoder given as an
// atoms x cells row-stochastic matrix.
double StochasticEncoderMse(const FiniteDistribution& source,
                            std::span<const double> encoder, int cells);

struct UniversalityEntry {
  PerceptionConstraint p = PerceptionConstraint::Unconstrained();
  std::vector<int> minimizer;
  double objective;
};

struct UniversalityReport {
  std::vector<UniversalityEntry> entries;
  std::vector<int> mmse_partition;
  bool constant = true;         // same minimizer at every grid point
  bool matches_mmse = true;     // and it is the MMSE-optimal partition
};

// Minimizes mse + [(W2 - sqrt(P))_+]^2 over all deterministic encoders with
// at most m cells, separately for every P in the grid.
UniversalityReport CheckOneShotUniversality(
    const FiniteDistribution& source, int m,
    std::span<const PerceptionConstraint> grid);

}  // namespace rdp

#endif  // RDP_QUANTIZER_H_
