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

#include "rdp/transport.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "rdp/random.h"

namespace rdp {
namespace {

// Brute force over vertices of the transportation polytope: every basic
// solution is a spanning forest of the bipartite support graph with
// m + n - 1 cells, and its flows follow by peeling leaves.
double VertexEnumerationCost(const FiniteDistribution& p,
                             const FiniteDistribution& q) {
  const int m = static_cast<int>(p.size());
  const int n = static_cast<int>(q.size());
  const int cells = m * n;
  const int basis = m + n - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> chosen(basis);
  std::vector<char> mask(cells, 0);
  std::fill(mask.begin(), mask.begin() + basis, 1);
  std::sort(mask.begin(), mask.end());
  do {
    std::vector<int> active;
    for (int c = 0; c < cells; ++c) {
      if (mask[c]) active.push_back(c);
    }
    std::vector<double> row(p.weights().begin(), p.weights().end());
    std::vector<double> col(q.weights().begin(), q.weights().end());
    std::vector<double> flow(cells, 0.0);
    std::vector<char> done(cells, 0);
    int remaining = basis;
    bool progress = true;
    while (remaining > 0 && progress) {
      progress = false;
      for (int c : active) {
        if (done[c]) continue;
        const int i = c / n, j = c % n;
        int row_degree = 0, col_degree = 0;
        for (int d : active) {
          if (done[d]) continue;
          row_degree += d / n == i;
          col_degree += d % n == j;
        }
        if (row_degree == 1 || col_degree == 1) {
          const double f = row_degree == 1 ? row[i] : col[j];
          flow[c] = f;
          row[i] -= f;
          col[j] -= f;
          done[c] = 1;
          --remaining;
          progress = true;
        }
      }
    }
    if (remaining > 0) continue;
    bool feasible = true;
    double cost = 0.0;
    for (int c : active) {
      feasible &= flow[c] >= -1e-12;
      cost += flow[c] * p.SquaredDistance(c / n, q, c % n);
    }
    for (double r : row) feasible &= std::abs(r) < 1e-12;
    for (double r : col) feasible &= std::abs(r) < 1e-12;
    if (feasible) best = std::min(best, cost);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

FiniteDistribution RandomDistribution(Rng& rng, int dim, int size,
                                      bool uniform_weights = false) {
  std::vector<double> coords(dim * size), weights(size);
  for (double& c : coords) c = UniformIn(rng, -2.0, 2.0);
  double total = 0.0;
  for (double& w : weights) total += (w = uniform_weights ? 1.0 : 0.05 + Uniform01(rng));
  for (double& w : weights) w /= total;
  double sum = 0.0;
  for (int i = 0; i + 1 < size; ++i) sum += weights[i];
  weights.back() = 1.0 - sum;
  return FiniteDistribution(dim, coords, weights);
}

TEST(FiniteDistribution, RejectsWeightsNotSummingToOne) {
  EXPECT_THROW(FiniteDistribution::OnLine({0.0, 1.0}, {0.5, 0.6}),
               ValidationError);
  EXPECT_THROW(FiniteDistribution::OnLine({0.0, 1.0}, {1.5, -0.5}),
               ValidationError);
  EXPECT_THROW(FiniteDistribution(2, {0.0, 1.0, 2.0}, {0.5, 0.5}),
               ValidationError);
}

TEST(FiniteDistribution, MergesDuplicateAtoms) {
  const auto d = FiniteDistribution::OnLine({1.0, 2.0, 1.0}, {0.25, 0.5, 0.25});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(d.weight(1), 0.5);
}

TEST(W2Exact, PointMasses) {
  const auto r = W2Exact(FiniteDistribution::PointMass({0.0, 0.0}),
                         FiniteDistribution::PointMass({1.0, 0.0}));
  EXPECT_DOUBLE_EQ(r.cost, 1.0);
}

TEST(W2Exact, IdenticalDistributionsGiveDiagonalPlan) {
  Rng rng = StreamRng(1, 0);
  const auto p = RandomDistribution(rng, 2, 7);
  const auto r = W2Exact(p, p);
  EXPECT_NEAR(r.cost, 0.0, 1e-14);
  for (const auto& e : r.plan.entries()) {
    EXPECT_EQ(e.source, e.target);
  }
}

TEST(W2Exact, ThreeByTwoExample) {
  const auto p = FiniteDistribution::OnLine({0.0, 1.0, 2.0},
                                            {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto q = FiniteDistribution::OnLine({0.5, 2.0}, {2.0 / 3, 1.0 / 3});
  const auto r = W2Exact(p, q);
  const double oracle = VertexEnumerationCost(p, q);
  EXPECT_NEAR(oracle, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.cost, oracle, 1e-12);
  EXPECT_LT(r.plan.MarginalError(), 1e-12);
}

TEST(W2Exact, MatchesVertexEnumerationOnSmallInstances) {
  Rng rng = StreamRng(2, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(UniformIndex(rng, 4));
    const int n = 1 + static_cast<int>(UniformIndex(rng, 3));
    const auto p = RandomDistribution(rng, 2, m);
    const auto q = RandomDistribution(rng, 2, n);
    EXPECT_NEAR(W2Exact(p, q).cost, VertexEnumerationCost(p, q), 1e-12)
        << "trial " << trial;
  }
}

TEST(W2Exact, PlansHaveExactMarginalsAndConsistentCost) {
  Rng rng = StreamRng(3, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = RandomDistribution(rng, 3, 5 + trial * 9);
    const auto q = RandomDistribution(rng, 3, 3 + trial * 7);
    const auto r = W2Exact(p, q);
    EXPECT_LT(r.plan.MarginalError(), 1e-10);
    double cost = 0.0;
    const auto dense = r.plan.Dense();
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double mass = dense[i * q.size() + j];
        EXPECT_GE(mass, 0.0);
        cost += mass * p.SquaredDistance(i, q, j);
      }
    }
    EXPECT_NEAR(cost, r.cost, 1e-10);
  }
}

TEST(W2Exact, SymmetricAndSatisfiesTriangleInequality) {
  Rng rng = StreamRng(4, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + trial % 3;
    const auto a = RandomDistribution(rng, dim, 1 + UniformIndex(rng, 20));
    const auto b = RandomDistribution(rng, dim, 1 + UniformIndex(rng, 20));
    const auto c = RandomDistribution(rng, dim, 1 + UniformIndex(rng, 20));
    const double ab = W2Exact(a, b).cost;
    EXPECT_NEAR(ab, W2Exact(b, a).cost, 1e-10);
    EXPECT_LE(std::sqrt(W2Exact(a, c).cost),
              std::sqrt(ab) + std::sqrt(W2Exact(b, c).cost) + 1e-9);
  }
}

TEST(W2Exact, ZeroCostExactlyForEqualDistributions) {
  const auto p = FiniteDistribution::OnLine({0.0, 1.0}, {0.5, 0.5});
  const auto reordered = FiniteDistribution::OnLine({1.0, 0.0}, {0.5, 0.5});
  const auto shifted = FiniteDistribution::OnLine({0.0, 1.0}, {0.5 + 1e-6, 0.5 - 1e-6});
  EXPECT_TRUE(p.SameAs(reordered));
  EXPECT_NEAR(W2Exact(p, reordered).cost, 0.0, 1e-15);
  EXPECT_FALSE(p.SameAs(shifted));
  EXPECT_GT(W2Exact(p, shifted).cost, 0.0);
}

TEST(W2Exact, RejectsOversizeOrMismatchedInputs) {
  std::vector<double> atoms(kMaxExactSupport + 1);
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = static_cast<double>(i);
  const auto big = FiniteDistribution::Uniform(1, atoms);
  EXPECT_THROW(W2Exact(big, FiniteDistribution::PointMass({0.0})),
               ValidationError);
  EXPECT_THROW(W2Exact(FiniteDistribution::PointMass({0.0}),
                       FiniteDistribution::PointMass({0.0, 0.0})),
               ValidationError);
}

TEST(W2Exact, HandlesTheLargestSupports) {
  Rng rng = StreamRng(5, 0);
  const auto p = RandomDistribution(rng, 1, static_cast<int>(kMaxExactSupport));
  const auto q = RandomDistribution(rng, 1, 64);
  const auto exact = W2Exact(p, q);
  EXPECT_NEAR(exact.cost, W2Quantile1D(p, q).cost, 1e-10);
  EXPECT_LT(exact.plan.MarginalError(), 1e-10);
}

TEST(W2Quantile1D, ShiftedPair) {
  const auto p = FiniteDistribution::OnLine({0.0, 1.0}, {0.5, 0.5});
  const auto q = FiniteDistribution::OnLine({2.0, 3.0}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(W2Quantile1D(p, q).cost, 4.0);
  EXPECT_DOUBLE_EQ(W2Quantile1D(p, p).cost, 0.0);
}

TEST(W2Quantile1D, AgreesWithExactSolver) {
  Rng rng = StreamRng(6, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = RandomDistribution(rng, 1, 10);
    const auto q = RandomDistribution(rng, 1, 10);
    const auto quantile = W2Quantile1D(p, q);
    EXPECT_NEAR(quantile.cost, W2Exact(p, q).cost, 1e-10);
    EXPECT_LT(quantile.plan.MarginalError(), 1e-12);
  }
}

TEST(W2Quantile1D, SampleOverloadMatchesSortedPairing) {
  const std::vector<double> a = {3.0, 1.0, 2.0};
  const std::vector<double> b = {0.0, 2.0, 1.0};
  EXPECT_DOUBLE_EQ(W2Quantile1D(std::span<const double>(a),
                                std::span<const double>(b)),
                   1.0);
}

TEST(W2Empirical, IdenticalSamplesHaveZeroCost) {
  Rng rng = StreamRng(7, 0);
  std::vector<double> a(2 * 300);
  for (double& x : a) x = StandardNormal(rng);
  EXPECT_DOUBLE_EQ(W2Empirical(a, a, 2), 0.0);
}

TEST(W2Empirical, RejectsUnequalCounts) {
  const std::vector<double> a(10, 0.0), b(12, 0.0);
  EXPECT_THROW(W2Empirical(a, b, 2), ValidationError);
}

TEST(W2Empirical, AssignmentAgreesWithExactSolverOnUniformWeights) {
  Rng rng = StreamRng(8, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + 11 * trial;
    std::vector<double> a(2 * n), b(2 * n);
    for (double& x : a) x = StandardNormal(rng);
    for (double& x : b) x = 1.0 + StandardNormal(rng);
    const double exact = W2Exact(FiniteDistribution::Uniform(2, a),
                                 FiniteDistribution::Uniform(2, b)).cost;
    EXPECT_NEAR(W2Empirical(a, b, 2), exact, 1e-10);
  }
}

std::vector<Vec2> CircleSamples(Rng& rng, int n) {
  std::vector<Vec2> out(n);
  for (Vec2& v : out) v = Vec2::Polar(1.0, UniformIn(rng, 0.0, kTwoPi));
  return out;
}

TEST(W2Empirical, CircleAgainstTwoCentroids) {
  Rng rng = StreamRng(9, 0);
  const auto circle = CircleSamples(rng, 2000);
  std::vector<Vec2> centroids(2000);
  for (Vec2& v : centroids) {
    v = {UniformIndex(rng, 2) == 0 ? 2.0 / kPi : -2.0 / kPi, 0.0};
  }
  EXPECT_NEAR(W2Empirical(circle, centroids), 1.0 - 4.0 / (kPi * kPi), 0.02);
}

TEST(W2Empirical, SelfDistanceCalibrationFloor) {
  Rng rng = StreamRng(10, 0);
  const auto a = CircleSamples(rng, 2000);
  const auto b = CircleSamples(rng, 2000);
  EXPECT_LE(W2Empirical(a, b), 0.01);
}

TEST(W2Empirical, ConvergesToExactCostAsSamplesGrow) {
  const auto p = FiniteDistribution(
      2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0}, {0.4, 0.3, 0.2, 0.1});
  const auto q = FiniteDistribution(2, {0.5, 0.5, 2.0, 0.0, -1.0, 0.5},
                                    {0.5, 0.25, 0.25});
  const double exact = W2Exact(p, q).cost;
  auto draw = [](Rng& rng, const FiniteDistribution& d, int n) {
    std::vector<double> out;
    for (int s = 0; s < n; ++s) {
      double u = Uniform01(rng);
      std::size_t i = 0;
      while (i + 1 < d.size() && u >= d.weight(i)) u -= d.weight(i++);
      out.insert(out.end(), d.atom(i).begin(), d.atom(i).end());
    }
    return out;
  };
  std::vector<double> errors;
  for (int n : {250, 1000, 4000}) {
    double error = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng = StreamRng(11, n * 10 + rep);
      error += std::abs(W2Empirical(draw(rng, p, n), draw(rng, q, n), 2) - exact);
    }
    errors.push_back(error / reps);
  }
  EXPECT_GT(errors[0], errors[1]);
  EXPECT_GT(errors[1], errors[2]);
}

TEST(SemidiscreteCircle, ClosedFormValues) {
  const double c = 2.0 / kPi;
  EXPECT_NEAR(SemidiscreteCircle(FiniteDistribution::Uniform(2, {c, 0, -c, 0})),
              1.0 - 4.0 / (kPi * kPi), 1e-12);
  EXPECT_NEAR(SemidiscreteCircle(FiniteDistribution::Uniform(
                  2, {c, 0, -c, 0, 0, c, 0, -c})),
              1.0 - 4.0 * (2.0 * std::sqrt(2.0) - 1.0) / (kPi * kPi), 1e-12);
  EXPECT_DOUBLE_EQ(SemidiscreteCircle(FiniteDistribution::PointMass({0, 0})),
                   1.0);
}

TEST(SemidiscreteCircle, MatchesExactTransportOnFineCircleGrid) {
  const int grid = 4096;
  std::vector<double> circle;
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * (i + 0.5) / grid;
    circle.insert(circle.end(), {std::cos(t), std::sin(t)});
  }
  const auto source = FiniteDistribution::Uniform(2, circle);
  for (int k : {1, 2, 3, 5}) {
    std::vector<double> atoms;
    for (int i = 0; i < k; ++i) {
      const double t = 0.3 + kTwoPi * i / k;
      atoms.insert(atoms.end(), {0.7 * std::cos(t), 0.7 * std::sin(t)});
    }
    const auto targets = FiniteDistribution::Uniform(2, atoms);
    EXPECT_NEAR(SemidiscreteCircle(targets), W2Exact(source, targets).cost, 1e-5)
        << "k = " << k;
  }
}

TEST(SemidiscreteCircle, RejectsAsymmetricTargets) {
  EXPECT_THROW(SemidiscreteCircle(FiniteDistribution::Uniform(2, {1, 0, 0, 1})),
               UnsupportedConfiguration);
  EXPECT_THROW(SemidiscreteCircle(FiniteDistribution(2, {1, 0, -1, 0}, {0.3, 0.7})),
               UnsupportedConfiguration);
  EXPECT_THROW(SemidiscreteCircle(FiniteDistribution::Uniform(2, {1, 0, -0.5, 0})),
               UnsupportedConfiguration);
}

TEST(TransportCsv, DistributionRoundTrip) {
  Rng rng = StreamRng(12, 0);
  const auto p = RandomDistribution(rng, 3, 9);
  std::stringstream buffer;
  WriteDistributionCsv(buffer, p);
  const auto back = ReadDistributionCsv(buffer);
  EXPECT_TRUE(p.SameAs(back, 0.0));
}

TEST(TransportCsv, MalformedInputIsRejected) {
  std::stringstream bad("x0,weight\n0.5,abc\n");
  EXPECT_THROW(ReadDistributionCsv(bad), ValidationError);
  std::stringstream ragged("x0,weight\n0.5\n");
  EXPECT_THROW(ReadDistributionCsv(ragged), ValidationError);
}

TEST(TransportCsv, PlanRows) {
  const auto p = FiniteDistribution::OnLine({0.0, 1.0}, {0.5, 0.5});
  const auto r = W2Exact(p, FiniteDistribution::PointMass({2.0}));
  std::stringstream buffer;
  WritePlanCsv(buffer, r.plan);
  EXPECT_EQ(buffer.str(), "s0,t0,mass\n0,2,0.5\n1,2,0.5\n");
}

}  // namespace
}  // namespace rdp
