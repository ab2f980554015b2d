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

#include "rdp/circle.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "rdp/parallel.h"
#include "rdp/transport.h"

namespace rdp {
namespace {

constexpr std::int64_t kChunkSize = 1 << 16;

void CheckSeed(int k, const AngularCode& code) {
  if (code.n().continuous()) {
    throw DomainError("seed index given for a continuous-dither code");
  }
  if (k < 0 || k >= code.n().count()) {
    throw DomainError(fmt::format("seed index {} outside [0, {})", k,
                                  code.n().count()));
  }
}

void CheckIndex(int j, const AngularCode& code) {
  if (j < 0 || j >= code.m()) {
    throw DomainError(
        fmt::format("cell index {} outside [0, {})", j, code.m()));
  }
}

double RadiusOf(int m) {
  return m * std::sin(kPi / m) / kPi;
}

}  // namespace

SeedCount SeedCount::Finite(int n) {
  if (n < 1) {
    throw ValidationError(fmt::format("seed count must be >= 1, got {}", n));
  }
  return SeedCount(n);
}

SeedCount SeedCount::Parse(std::string_view text) {
  if (text == "inf") return ContinuousDither();
  int n = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError(fmt::format(
        "seed count must be a positive integer or 'inf', got '{}'", text));
  }
  return Finite(n);
}

int SeedCount::count() const {
  if (continuous()) {
    throw std::logic_error("continuous dither has no finite seed count");
  }
  return n_;
}

std::string SeedCount::ToString() const {
  return continuous() ? std::string("inf") : std::to_string(n_);
}

AngularCode::AngularCode(int m, SeedCount n) : m_(m), n_(n) {
  if (m < 1) {
    throw ValidationError(fmt::format("codebook size must be >= 1, got {}", m));
  }
}

double AngularCode::rate_bits() const { return std::log2(m_); }

std::optional<double> AngularCode::common_rate_bits() const {
  if (n_.continuous()) return std::nullopt;
  return std::log2(n_.count());
}

double AngularCode::mmse_radius() const { return RadiusOf(m_); }

CirclePoint CirclePoint::FromAngle(double angle) {
  return {ReduceAngle(angle)};
}

double ReduceAngle(double angle) {
  if (!std::isfinite(angle)) throw DomainError("angle must be finite");
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

int Encode(double theta, int k, const AngularCode& code) {
  CheckSeed(k, code);
  const int m = code.m();
  const int n = code.n().count();
  // Position in units of the fine arc 2 pi / (MN).
  const double t = ReduceAngle(theta) * (static_cast<double>(m) * n) / kTwoPi;
  auto j = static_cast<std::int64_t>(
      std::floor((2.0 * t - 2.0 * k + n) / (2.0 * n)));
  // Settle angles within rounding of a cut against the exact cell bounds.
  const double mn = static_cast<double>(m) * n;
  const double lo = ((2.0 * j - 1.0) * n + 2.0 * k) * kPi / mn;
  const double hi = ((2.0 * j + 1.0) * n + 2.0 * k) * kPi / mn;
  double offset = ReduceAngle(theta) - lo;
  offset -= kTwoPi * std::round(offset / kTwoPi);
  if (offset < 0.0 && offset > -kPi / mn) {
    --j;
  } else if (offset >= hi - lo) {
    ++j;
  }
  return static_cast<int>(((j % m) + m) % m);
}

AngleInterval CellInterval(int j, int k, const AngularCode& code) {
  CheckSeed(k, code);
  CheckIndex(j, code);
  const double mn = static_cast<double>(code.m()) * code.n().count();
  const int n = code.n().count();
  return {((2.0 * j - 1.0) * n + 2.0 * k) * kPi / mn,
          ((2.0 * j + 1.0) * n + 2.0 * k) * kPi / mn};
}

double CentroidAngle(int j, int k, const AngularCode& code) {
  CheckSeed(k, code);
  CheckIndex(j, code);
  const double mn = static_cast<double>(code.m()) * code.n().count();
  return ReduceAngle(2.0 * (static_cast<double>(j) * code.n().count() + k) *
                     kPi / mn);
}

Vec2 MmseReconstruct(int j, int k, const AngularCode& code) {
  return Vec2::Polar(code.mmse_radius(), CentroidAngle(j, k, code));
}

double AnalyticDistortion(int m) {
  if (m < 1) throw ValidationError("codebook size must be >= 1");
  const double s = std::sin(kPi / m);
  return 1.0 - static_cast<double>(m) * m * s * s / (kPi * kPi);
}

double AnalyticPerception(int m, SeedCount n) {
  if (m < 1) throw ValidationError("codebook size must be >= 1");
  if (n.continuous()) {
    const double gap = 1.0 - RadiusOf(m);
    return gap * gap;
  }
  const double s = std::sin(kPi / m);
  const double fine = 2.0 * n.count() * std::sin(kPi / (m * static_cast<double>(n.count())));
  return 1.0 - static_cast<double>(m) * m * (fine - s) * s / (kPi * kPi);
}

double AnalyticTradeoff(int m, SeedCount n, PerceptionConstraint p) {
  return InterpolatedDistortion(AnalyticDistortion(m), AnalyticPerception(m, n),
                                p);
}

double AnalyticAlpha(int m, SeedCount n, PerceptionConstraint p) {
  return InterpolationWeight(AnalyticPerception(m, n), p);
}

Vec2 SamplePerfect(int j, int k, const AngularCode& code, Rng& rng) {
  CheckSeed(k, code);
  CheckIndex(j, code);
  const double mn = static_cast<double>(code.m()) * code.n().count();
  const double fine_index =
      static_cast<double>(j) * code.n().count() + k;
  const double angle = (2.0 * fine_index - 1.0 + 2.0 * Uniform01(rng)) * kPi / mn;
  return Vec2::Polar(1.0, angle);
}

int DitheredEncode(double theta, double dither, int m) {
  if (m < 1) throw ValidationError("codebook size must be >= 1");
  if (!(dither >= 0.0) || dither >= kTwoPi / m) {
    throw DomainError(fmt::format("dither {} outside [0, 2 pi / {})", dither, m));
  }
  const double t = ReduceAngle(theta - dither) * m / kTwoPi;
  const auto j = static_cast<std::int64_t>(std::floor(t + 0.5));
  return static_cast<int>(((j % m) + m) % m);
}

Vec2 DitheredEncodeDecode(double theta, double dither, int m) {
  const int j = DitheredEncode(theta, dither, m);
  return Vec2::Polar(RadiusOf(m), kTwoPi * j / m + dither);
}

CircleReconstruction InterpolatedReconstruction(double theta, SharedSeed seed,
                                                const AngularCode& code,
                                                PerceptionConstraint p,
                                                Rng& rng) {
  CircleReconstruction out;
  out.alpha = AnalyticAlpha(code.m(), code.n(), p);
  if (code.n().continuous()) {
    const auto* dither = std::get_if<DitherAngle>(&seed);
    if (dither == nullptr) {
      throw DomainError("continuous-dither code needs a dither angle");
    }
    const int j = DitheredEncode(theta, dither->value, code.m());
    const double angle = kTwoPi * j / code.m() + dither->value;
    out.x_tilde = Vec2::Polar(code.mmse_radius(), angle);
    out.x_prime = Vec2::Polar(1.0, angle);
  } else {
    const auto* k = std::get_if<int>(&seed);
    if (k == nullptr) throw DomainError("finite code needs a seed index");
    const int j = Encode(theta, *k, code);
    out.x_tilde = MmseReconstruct(j, *k, code);
    out.x_prime = SamplePerfect(j, *k, code, rng);
  }
  out.x_hat = (1.0 - out.alpha) * out.x_prime + out.alpha * out.x_tilde;
  return out;
}

SharedSeed DrawSeed(const AngularCode& code, Rng& rng) {
  if (code.n().continuous()) {
    return DitherAngle{UniformIn(rng, 0.0, code.cell_width())};
  }
  return UniformIndex(rng, code.n().count());
}

TradeoffPoint MonteCarloSchemeEval(const AngularCode& code,
                                   PerceptionConstraint p,
                                   const MonteCarloOptions& options) {
  if (options.samples < 1) {
    throw ValidationError("Monte Carlo evaluation needs at least one sample");
  }
  if (options.perception_samples < 0) {
    throw ValidationError("perception sample count must be >= 0");
  }
  const std::int64_t paired =
      std::min(options.samples, options.perception_samples);

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<Vec2> sources;
    std::vector<Vec2> outputs;
  };
  const auto partials = MapChunks<Partial>(
      options.samples, kChunkSize,
      [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        Rng rng = StreamRng(options.seed, static_cast<std::uint64_t>(chunk));
        Partial part;
        for (std::int64_t i = begin; i < end; ++i) {
          const double theta = UniformIn(rng, 0.0, kTwoPi);
          const SharedSeed seed = DrawSeed(code, rng);
          const auto rec = InterpolatedReconstruction(theta, seed, code, p, rng);
          const Vec2 x = Vec2::Polar(1.0, theta);
          const double d = SquaredDistance(x, rec.x_hat);
          part.sum += d;
          part.sum_sq += d * d;
          if (i < paired) {
            part.sources.push_back(x);
            part.outputs.push_back(rec.x_hat);
          }
        }
        return part;
      });

  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<Vec2> sources, outputs;
  for (const Partial& part : partials) {
    sum += part.sum;
    sum_sq += part.sum_sq;
    sources.insert(sources.end(), part.sources.begin(), part.sources.end());
    outputs.insert(outputs.end(), part.outputs.begin(), part.outputs.end());
  }
  const double n = static_cast<double>(options.samples);
  const double mean = sum / n;
  const double variance =
      options.samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0))
                          : 0.0;

  TradeoffPoint point;
  point.rate = code.rate_bits();
  point.common_rate = code.common_rate_bits();
  point.target = p;
  point.distortion = mean;
  point.distortion_std_error = std::sqrt(variance / n);
  point.provenance = Provenance::kMonteCarlo;
  point.n_samples = options.samples;
  point.perception_samples = paired;
  if (paired > 0) point.perception = W2Empirical(sources, outputs);
  return point;
}

SupportGeometry Supports(const AngularCode& code, PerceptionConstraint p) {
  SupportGeometry g;
  g.alpha = AnalyticAlpha(code.m(), code.n(), p);
  g.mmse_radius = code.mmse_radius();
  if (code.n().continuous()) {
    g.arc_radius = 1.0 - g.alpha * (1.0 - g.mmse_radius);
    g.arc_half_width = kPi;
    g.arc_centers.push_back({0.0, 0.0});
    return g;
  }
  const int n = code.n().count();
  g.arc_radius = 1.0 - g.alpha;
  g.arc_half_width = kPi / (static_cast<double>(code.m()) * n);
  for (int j = 0; j < code.m(); ++j) {
    for (int k = 0; k < n; ++k) {
      const Vec2 c = MmseReconstruct(j, k, code);
      g.centroids.push_back(c);
      g.arc_centers.push_back(g.alpha * c);
    }
  }
  return g;
}

double ArcPartitionMse(std::vector<double> boundaries) {
  if (boundaries.empty()) return 1.0;
  for (double& b : boundaries) b = ReduceAngle(b);
  std::sort(boundaries.begin(), boundaries.end());
  double mse = 0.0;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const double next = i + 1 < boundaries.size() ? boundaries[i + 1]
                                                  : boundaries[0] + kTwoPi;
    const double length = next - boundaries[i];
    if (length <= 0.0) continue;
    const double half = 0.5 * length;
    const double radius = std::sin(half) / half;
    mse += length / kTwoPi * (1.0 - radius * radius);
  }
  return mse;
}

}  // namespace rdp
