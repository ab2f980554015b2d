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

#ifndef RDP_TRANSPORT_H_
#define RDP_TRANSPORT_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rdp/common.h"

namespace rdp {

// Probability distribution with finite support in R^dim. Coordinates are
// stored row-major. Atoms with identical coordinates are merged on
// construction (weights summed), so atoms are pairwise distinct.
class FiniteDistribution {
 public:
  // Throws ValidationError unless weights are nonnegative and sum to one
  // within 1e-12, and coords.size() == dim * weights.size().
  FiniteDistribution(int dim, std::vector<double> coords,
                     std::vector<double> weights);

  static FiniteDistribution Uniform(int dim, std::vector<double> coords);
  static FiniteDistribution OnLine(std::vector<double> points,
                                   std::vector<double> weights);
  static FiniteDistribution PointMass(std::vector<double> point);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> coords() const { return coords_; }

  double SquaredDistance(std::size_t i, const FiniteDistribution& other,
                         std::size_t j) const;

  // Same atoms and weights up to ordering, weights compared within tol.
  bool SameAs(const FiniteDistribution& other, double tol = 1e-12) const;

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

// Coupling of two finite distributions, kept in sparse form (optimal basic
// plans have at most m + n - 1 nonzero entries).
class TransportPlan {
 public:
  struct Entry {
    std::size_t source;
    std::size_t target;
    double mass;
  };

  TransportPlan(FiniteDistribution source, FiniteDistribution target,
                std::vector<Entry> entries);

  const FiniteDistribution& source() const { return source_; }
  const FiniteDistribution& target() const { return target_; }
  std::span<const Entry> entries() const { return entries_; }
  // Sum of mass * squared Euclidean distance.
  double cost() const { return cost_; }

  std::vector<double> RowSums() const;
  std::vector<double> ColumnSums() const;
  // Largest deviation of row or column sums from the prescribed marginals.
  double MarginalError() const;
  // Dense source.size() x target.size() matrix, row-major.
  std::vector<double> Dense() const;

 private:
  FiniteDistribution source_;
  FiniteDistribution target_;
  std::vector<Entry> entries_;
  double cost_;
};

struct TransportResult {
  double cost;  // squared W2
  TransportPlan plan;
};

// Maximum support size accepted by the exact solvers.
inline constexpr std::size_t kMaxExactSupport = 4096;

// Exact squared W2 between finite distributions (primal network simplex).
// Throws ValidationError for dimension mismatch or oversize supports and
// SolverError if the simplex fails to certify optimality.
TransportResult W2Exact(const FiniteDistribution& p,
                        const FiniteDistribution& q);

// Squared W2 between the empirical measures of two equally sized point sets
// (flat coordinates), by optimal assignment on the squared-distance matrix.
double W2Empirical(std::span<const double> samples_a,
                   std::span<const double> samples_b, int dim);
double W2Empirical(std::span<const Vec2> samples_a,
                   std::span<const Vec2> samples_b);

// Monotone (comonotone) coupling of two distributions on the real line.
TransportResult W2Quantile1D(const FiniteDistribution& p,
                             const FiniteDistribution& q);

// Same coupling cost for two equally weighted samples on the line; sorts
// copies of the inputs. No size limit.
double W2Quantile1D(std::span<const double> a, std::span<const double> b);

// Squared W2 between the uniform distribution on the unit circle and k
// equally weighted atoms that are rotated copies of one another, via
// nearest-atom arc integration. Throws UnsupportedConfiguration for any
// other target.
double SemidiscreteCircle(const FiniteDistribution& targets);

// CSV with header "x0,...,x{dim-1},weight".
void WriteDistributionCsv(std::ostream& out, const FiniteDistribution& dist);
FiniteDistribution ReadDistributionCsv(std::istream& in);
// CSV with header "s0,...,t0,...,mass": source coordinates, target
// coordinates and the mass moved between them.
void WritePlanCsv(std::ostream& out, const TransportPlan& plan);

}  // namespace rdp

#endif  // RDP_TRANSPORT_H_
