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

#include "rdp/quantizer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace rdp {
namespace {

constexpr double kEqualityTolerance = 1e-9;

void CheckRegime(const FiniteDistribution& source, int m) {
  if (m < 1) {
    throw ValidationError(fmt::format("codebook size must be >= 1, got {}", m));
  }
  if (source.size() > kMaxExhaustiveSupport || m > kMaxExhaustiveCells) {
    throw RegimeExceeded(fmt::format(
        "exhaustive regime exceeded: support {} (max {}), cells {} (max {})",
        source.size(), kMaxExhaustiveSupport, m, kMaxExhaustiveCells));
  }
}

double SquaredDistanceTo(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

bool StrictlyBetter(double candidate, double best, double scale) {
  return candidate < best - 1e-12 * std::max(1.0, scale);
}

}  // namespace

FiniteDistribution QuantizerDesign::OutputDistribution() const {
  std::vector<double> coords, weights;
  double total = 0.0;
  for (int c = 0; c < cells(); ++c) {
    if (cell_weights[c] <= 0.0) continue;
    const auto point = centroid(c);
    coords.insert(coords.end(), point.begin(), point.end());
    weights.push_back(cell_weights[c]);
    total += cell_weights[c];
  }
  for (double& w : weights) w /= total;
  return FiniteDistribution(dim, std::move(coords), std::move(weights));
}

QuantizerDesign DesignFromAssignment(const FiniteDistribution& source,
                                     std::vector<int> partition, int cells) {
  if (partition.size() != source.size()) {
    throw ValidationError(fmt::format(
        "encoder assigns {} atoms, source has {}", partition.size(),
        source.size()));
  }
  if (cells < 1) throw ValidationError("encoder needs at least one cell");
  QuantizerDesign design;
  design.dim = source.dim();
  design.cell_weights.assign(cells, 0.0);
  design.centroids.assign(static_cast<std::size_t>(cells) * source.dim(), 0.0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    const int c = partition[i];
    if (c < 0 || c >= cells) {
      throw ValidationError(fmt::format(
          "atom {} assigned to cell {} outside [0, {})", i, c, cells));
    }
    const double w = source.weight(i);
    design.cell_weights[c] += w;
    const auto atom = source.atom(i);
    for (int d = 0; d < source.dim(); ++d) {
      design.centroids[static_cast<std::size_t>(c) * source.dim() + d] +=
          w * atom[d];
    }
  }
  for (int c = 0; c < cells; ++c) {
    if (design.cell_weights[c] <= 0.0) {
      std::fill_n(design.centroids.begin() + c * source.dim(), source.dim(), 0.0);
      continue;
    }
    for (int d = 0; d < source.dim(); ++d) {
      design.centroids[static_cast<std::size_t>(c) * source.dim() + d] /=
          design.cell_weights[c];
    }
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    design.mse += source.weight(i) *
                  SquaredDistanceTo(source.atom(i), design.centroid(partition[i]));
  }
  design.partition = std::move(partition);
  return design;
}

QuantizerDesign OptimalMmseQuantizer(const FiniteDistribution& source, int m) {
  CheckRegime(source, m);
  const int s = static_cast<int>(source.size());
  const int dim = source.dim();
  double second_moment = 0.0;
  for (int i = 0; i < s; ++i) {
    for (double x : source.atom(i)) second_moment += source.weight(i) * x * x;
  }

  std::vector<double> sums(static_cast<std::size_t>(m) * dim);
  std::vector<double> weights(m);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_partition;
  // mse = E||X||^2 - sum_c ||S_c||^2 / W_c with S_c the weighted cell sums.
  ForEachPartition(s, m, [&](const std::vector<int>& a, int blocks) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(weights.begin(), weights.end(), 0.0);
    for (int i = 0; i < s; ++i) {
      const double w = source.weight(i);
      weights[a[i]] += w;
      const auto atom = source.atom(i);
      for (int d = 0; d < dim; ++d) sums[a[i] * dim + d] += w * atom[d];
    }
    double explained = 0.0;
    for (int c = 0; c < blocks; ++c) {
      if (weights[c] <= 0.0) continue;
      double norm = 0.0;
      for (int d = 0; d < dim; ++d) norm += sums[c * dim + d] * sums[c * dim + d];
      explained += norm / weights[c];
    }
    const double mse = second_moment - explained;
    if (best_partition.empty() || StrictlyBetter(mse, best, second_moment)) {
      best = mse;
      best_partition = a;
    }
  });
  return DesignFromAssignment(source, std::move(best_partition), m);
}

Prop1Check VerifyProp1(const FiniteDistribution& source, int m) {
  const QuantizerDesign design = OptimalMmseQuantizer(source, m);
  const double w2sq = W2Exact(source, design.OutputDistribution()).cost;
  return {design.mse, w2sq, std::abs(design.mse - w2sq) <= kEqualityTolerance};
}

PerfectPerceptionCheck PerfectPerceptionMinDistortion(
    const FiniteDistribution& source, int m) {
  const QuantizerDesign design = OptimalMmseQuantizer(source, m);
  // Z and Z' are independent draws from the same cell's posterior.
  double posterior = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < source.size(); ++j) {
      const int c = design.partition[i];
      if (design.partition[j] != c) continue;
      posterior += source.weight(i) * source.weight(j) / design.cell_weights[c] *
                   source.SquaredDistance(i, source, j);
    }
  }
  const double twice = 2.0 * design.mse;
  return {twice, posterior, std::abs(twice - posterior) <= kEqualityTolerance};
}

DecoderEvaluation EvaluateInterpolationDecoder(
    const FiniteDistribution& source, const QuantizerDesign& design,
    std::span<const double> generator, double alpha) {
  const std::size_t s = source.size();
  const int cells = design.cells();
  if (generator.size() != s * cells) {
    throw ValidationError(fmt::format(
        "generator must be {} x {}, got {} entries", cells, s, generator.size()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError(fmt::format("interpolation weight {} outside [0, 1]", alpha));
  }
  std::vector<double> marginal(s, 0.0);
  for (int c = 0; c < cells; ++c) {
    double row = 0.0;
    for (std::size_t x = 0; x < s; ++x) {
      const double g = generator[c * s + x];
      if (g < 0.0) throw ValidationError("generator has a negative probability");
      row += g;
      marginal[x] += design.cell_weights[c] * g;
    }
    if (design.cell_weights[c] > 0.0 && std::abs(row - 1.0) > kEqualityTolerance) {
      throw ValidationError(fmt::format("generator row {} sums to {}", c, row));
    }
  }
  for (std::size_t x = 0; x < s; ++x) {
    if (std::abs(marginal[x] - source.weight(x)) > kEqualityTolerance) {
      throw ValidationError(
          "generator output is not distributed as the source");
    }
  }

  const int dim = source.dim();
  DecoderEvaluation out;
  std::vector<double> output_coords, output_weights;
  std::vector<double> point(dim);
  for (int c = 0; c < cells; ++c) {
    if (design.cell_weights[c] <= 0.0) continue;
    const auto tilde = design.centroid(c);
    for (std::size_t x = 0; x < s; ++x) {
      const double g = generator[c * s + x];
      if (g <= 0.0) continue;
      const auto prime = source.atom(x);
      for (int d = 0; d < dim; ++d) {
        point[d] = (1.0 - alpha) * prime[d] + alpha * tilde[d];
      }
      out.transport_cost +=
          design.cell_weights[c] * g * SquaredDistanceTo(prime, tilde);
      output_coords.insert(output_coords.end(), point.begin(), point.end());
      output_weights.push_back(design.cell_weights[c] * g);
      for (std::size_t i = 0; i < s; ++i) {
        if (design.partition[i] != c) continue;
        out.distortion += source.weight(i) * g * SquaredDistanceTo(source.atom(i), point);
      }
    }
  }
  double total = 0.0;
  for (double w : output_weights) total += w;
  for (double& w : output_weights) w /= total;
  const FiniteDistribution output(dim, std::move(output_coords),
                                  std::move(output_weights));
  out.perception = W2Exact(source, output).cost;
  return out;
}

std::vector<double> OptimalTransportGenerator(const FiniteDistribution& source,
                                              const QuantizerDesign& design) {
  const FiniteDistribution reconstruction = design.OutputDistribution();
  const auto plan = W2Exact(reconstruction, source).plan;
  const std::size_t s = source.size();
  std::vector<double> laws(reconstruction.size() * s, 0.0);
  for (const auto& e : plan.entries()) {
    laws[e.source * s + e.target] += e.mass / reconstruction.weight(e.source);
  }
  std::vector<double> generator(static_cast<std::size_t>(design.cells()) * s);
  for (int c = 0; c < design.cells(); ++c) {
    auto row = generator.begin() + static_cast<std::ptrdiff_t>(c * s);
    if (design.cell_weights[c] <= 0.0) {
      std::copy(source.weights().begin(), source.weights().end(), row);
      continue;
    }
    const auto tilde = design.centroid(c);
    std::size_t atom = 0;
    while (SquaredDistanceTo(reconstruction.atom(atom), tilde) != 0.0) ++atom;
    std::copy_n(laws.begin() + static_cast<std::ptrdiff_t>(atom * s), s, row);
  }
  return generator;
}

std::vector<double> PosteriorGenerator(const FiniteDistribution& source,
                                       const QuantizerDesign& design) {
  const std::size_t s = source.size();
  std::vector<double> generator(static_cast<std::size_t>(design.cells()) * s, 0.0);
  for (int c = 0; c < design.cells(); ++c) {
    for (std::size_t x = 0; x < s; ++x) {
      if (design.cell_weights[c] <= 0.0) {
        generator[c * s + x] = source.weight(x);
      } else if (design.partition[x] == c) {
        generator[c * s + x] = source.weight(x) / design.cell_weights[c];
      }
    }
  }
  return generator;
}

PipelineResult InterpolationPipeline(const FiniteDistribution& source,
                                     std::span<const int> encoder,
                                     PerceptionConstraint p,
                                     GeneratorKind kind) {
  if (encoder.empty()) throw ValidationError("empty encoder");
  const int cells = *std::max_element(encoder.begin(), encoder.end()) + 1;
  const QuantizerDesign design = DesignFromAssignment(
      source, std::vector<int>(encoder.begin(), encoder.end()), cells);

  PipelineResult result;
  result.generator_kind = kind;
  result.mmse_distortion = design.mse;
  result.perception_of_mmse = W2Exact(source, design.OutputDistribution()).cost;
  const bool transport = kind == GeneratorKind::kOptimalTransport;
  const double cost = transport ? result.perception_of_mmse : design.mse;
  result.alpha = InterpolationWeight(cost, p);
  const auto generator = transport ? OptimalTransportGenerator(source, design)
                                   : PosteriorGenerator(source, design);
  const auto evaluation =
      EvaluateInterpolationDecoder(source, design, generator, result.alpha);
  result.achieved_distortion = evaluation.distortion;
  result.achieved_perception = evaluation.perception;
  return result;
}

double StochasticEncoderMse(const FiniteDistribution& source,
                            std::span<const double> encoder, int cells) {
  const std::size_t s = source.size();
  const int dim = source.dim();
  if (cells < 1 || encoder.size() != s * cells) {
    throw ValidationError("stochastic encoder must be atoms x cells");
  }
  std::vector<double> weights(cells, 0.0);
  std::vector<double> centroids(static_cast<std::size_t>(cells) * dim, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    double row = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double q = encoder[i * cells + c];
      if (q < 0.0) throw ValidationError("negative encoder probability");
      row += q;
      weights[c] += source.weight(i) * q;
      for (int d = 0; d < dim; ++d) {
        centroids[c * dim + d] += source.weight(i) * q * source.atom(i)[d];
      }
    }
    if (std::abs(row - 1.0) > kEqualityTolerance) {
      throw ValidationError(fmt::format("encoder row {} sums to {}", i, row));
    }
  }
  for (int c = 0; c < cells; ++c) {
    if (weights[c] <= 0.0) continue;
    for (int d = 0; d < dim; ++d) centroids[c * dim + d] /= weights[c];
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    for (int c = 0; c < cells; ++c) {
      const double q = encoder[i * cells + c];
      if (q <= 0.0) continue;
      mse += source.weight(i) * q *
             SquaredDistanceTo(source.atom(i),
                               {centroids.data() + c * dim,
                                static_cast<std::size_t>(dim)});
    }
  }
  return mse;
}

UniversalityReport CheckOneShotUniversality(
    const FiniteDistribution& source, int m,
    std::span<const PerceptionConstraint> grid) {
  CheckRegime(source, m);
  if (grid.empty()) throw ValidationError("perception grid is empty");
  UniversalityReport report;
  report.mmse_partition = OptimalMmseQuantizer(source, m).partition;
  report.entries.reserve(grid.size());
  for (const auto& p : grid) {
    report.entries.push_back({p, {}, std::numeric_limits<double>::infinity()});
  }
  ForEachPartition(static_cast<int>(source.size()), m,
                   [&](const std::vector<int>& a, int blocks) {
    const QuantizerDesign design = DesignFromAssignment(source, a, blocks);
    const double w2sq = W2Exact(source, design.OutputDistribution()).cost;
    for (auto& entry : report.entries) {
      const double objective = InterpolatedDistortion(design.mse, w2sq, entry.p);
      if (entry.minimizer.empty() ||
          StrictlyBetter(objective, entry.objective, entry.objective)) {
        entry.objective = objective;
        entry.minimizer = a;
      }
    }
  });
  for (const auto& entry : report.entries) {
    report.constant &= entry.minimizer == report.entries.front().minimizer;
  }
  report.matches_mmse =
      report.constant && report.entries.front().minimizer == report.mmse_partition;
  return report;
}

}  // namespace rdp
