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

#ifndef RDP_CIRCLE_H_
#define RDP_CIRCLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rdp/common.h"
#include "rdp/random.h"

namespace rdp {

// Common-randomness size of a circle code: a finite number of seeds or the
// continuous-dither limit (spelled "inf").
class SeedCount {
 public:
  static SeedCount Finite(int n);
  static SeedCount ContinuousDither() { return SeedCount(0); }
  // Accepts a positive integer or "inf".
  static SeedCount Parse(std::string_view text);

  bool continuous() const { return n_ == 0; }
  int count() const;
  std::string ToString() const;

  friend bool operator==(SeedCount, SeedCount) = default;

 private:
  explicit SeedCount(int n) : n_(n) {}
  int n_;
};

// The (M, N) unit-circle quantizer: M equal arcs, rotated by one of N seed
// offsets 2 pi k / (M N) or by a continuous dither in [0, 2 pi / M).
class AngularCode {
 public:
  AngularCode(int m, SeedCount n);

  int m() const { return m_; }
  SeedCount n() const { return n_; }
  double rate_bits() const;
  // Empty for continuous dither.
  std::optional<double> common_rate_bits() const;
  double cell_width() const { return kTwoPi / m_; }
  // Norm of every reconstruction point, M sin(pi/M) / pi.
  double mmse_radius() const;

 private:
  int m_;
  SeedCount n_;
};

struct CirclePoint {
  double theta = 0.0;  // in [0, 2 pi)

  static CirclePoint FromAngle(double angle);
  Vec2 Cartesian() const { return Vec2::Polar(1.0, theta); }
};

struct CircleReconstruction {
  Vec2 x_tilde;
  Vec2 x_prime;
  Vec2 x_hat;
  double alpha = 1.0;
};

struct DitherAngle {
  double value = 0.0;
};

// Shared randomness for one use of a code: a seed index for finite N, a
// dither angle for continuous dither.
using SharedSeed = std::variant<int, DitherAngle>;

// Reduces an angle into [0, 2 pi).
double ReduceAngle(double angle);

// Index j of the half-open cell [((2j-1)N + 2k) pi/(MN), ((2j+1)N + 2k) pi/(MN))
// containing theta (mod 2 pi). Throws DomainError for k outside [0, N) or a
// continuous-dither code.
int Encode(double theta, int k, const AngularCode& code);

// Half-open cell of index j under seed k as [lo, hi) with hi - lo = 2 pi / M;
// lo may be negative.
struct AngleInterval {
  double lo;
  double hi;
};
AngleInterval CellInterval(int j, int k, const AngularCode& code);

// Angle 2 (jN + k) pi / (MN) of the conditional mean, reduced.
double CentroidAngle(int j, int k, const AngularCode& code);

Vec2 MmseReconstruct(int j, int k, const AngularCode& code);

double AnalyticDistortion(int m);
double AnalyticPerception(int m, SeedCount n);
double AnalyticTradeoff(int m, SeedCount n, PerceptionConstraint p);
// Interpolation weight of the optimal decoder, min(1, sqrt(P / perception)).
double AnalyticAlpha(int m, SeedCount n, PerceptionConstraint p);

// Point with angle uniform on [(2jN + 2k - 1) pi/(MN), (2jN + 2k + 1) pi/(MN)).
Vec2 SamplePerfect(int j, int k, const AngularCode& code, Rng& rng);

// Subtractive dithered quantizer: index of the nearest multiple of 2 pi / M
// to theta - dither, and its reconstruction at angle 2 pi j / M + dither and
// radius M sin(pi/M) / pi.
int DitheredEncode(double theta, double dither, int m);
Vec2 DitheredEncodeDecode(double theta, double dither, int m);

// Full encode / MMSE / perfect-sample / interpolate chain for one source
// angle. With continuous dither the perfect sample is the unit vector along
// the reconstruction.
CircleReconstruction InterpolatedReconstruction(double theta, SharedSeed seed,
                                                const AngularCode& code,
                                                PerceptionConstraint p,
                                                Rng& rng);

// Draws a seed uniformly (index or dither) for `code`.
SharedSeed DrawSeed(const AngularCode& code, Rng& rng);

struct MonteCarloOptions {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  // Pairs used for the empirical perception estimate; 0 skips it.
  std::int64_t perception_samples = 2000;
};

// Empirical distortion (with standard error) and empirical squared W2
// between source and reconstruction samples of the full scheme.
TradeoffPoint MonteCarloSchemeEval(const AngularCode& code,
                                   PerceptionConstraint p,
                                   const MonteCarloOptions& options);

// Geometry of the reconstruction supports. Each (j, k) output is uniform on
// an arc of radius `arc_radius` centered at alpha times the centroid, of
// angular half width `arc_half_width`. For continuous dither the output is
// the full circle of radius `arc_radius` about the origin.
struct SupportGeometry {
  double alpha = 1.0;
  double mmse_radius = 0.0;
  double arc_radius = 0.0;
  double arc_half_width = 0.0;
  std::vector<Vec2> centroids;
  std::vector<Vec2> arc_centers;
};
SupportGeometry Supports(const AngularCode& code, PerceptionConstraint p);

// MSE of the conditional-mean decoder for the uniform circle partitioned into
// the given arcs. `boundaries` are increasing cut angles; the arcs run between
// consecutive cuts and wrap around 2 pi.
double ArcPartitionMse(std::vector<double> boundaries);

}  // namespace rdp

#endif  // RDP_CIRCLE_H_
