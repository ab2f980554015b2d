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

#include "rdp/lattice.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "rdp/parallel.h"
#include "rdp/random.h"
#include "rdp/transport.h"

namespace rdp {
namespace {

constexpr std::int64_t kChunk = 65536;
constexpr std::uint64_t kGeneratorStreamBase = std::uint64_t{1} << 40;

std::int64_t FloorMod(std::int64_t a, std::int64_t b) {
  const std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

void CheckCoset(int k, const NestedLatticeSpec& spec) {
  if (k < 0 || k >= spec.n()) {
    throw DomainError(fmt::format("coset index {} outside [0, {})", k, spec.n()));
  }
}

// Unconstrained nearest point of coset k, ties to the lower point.
std::int64_t NearestInCoset(double x, int k, const NestedLatticeSpec& spec) {
  const double t = x / spec.delta();
  const double q = std::ceil((t - k) / spec.n() - 0.5);
  return k + static_cast<std::int64_t>(q) * spec.n();
}

// Representative of v modulo period in [-period / 2, period / 2).
double WrapCentered(double v, double period) {
  return v - period * std::floor(v / period + 0.5);
}

// Truncated N(0, sigma^2) on [a, b).
double TruncatedNormal(Rng& rng, double sigma, double a, double b) {
  const boost::math::normal_distribution<double> normal(0.0, sigma);
  bool flip = false;
  if (a > 0.0) {
    flip = true;
    std::swap(a, b);
    a = -a;
    b = -b;
  }
  const double fa = boost::math::cdf(normal, a);
  const double fb = boost::math::cdf(normal, b);
  double value;
  if (!(fb > fa)) {
    value = UniformIn(rng, a, b);
  } else {
    const double u = fa + (fb - fa) * Uniform01(rng);
    value = u <= 0.0 ? a : boost::math::quantile(normal, u);
    value = std::clamp(value, a, std::nextafter(b, a));
  }
  return flip ? -value : value;
}

struct ChunkSamples {
  std::vector<double> x;
  std::vector<std::int64_t> u;
  std::vector<double> fine_offset;  // generator draw relative to the codeword
  std::int64_t clipped = 0;
};

// Everything that does not depend on the perception level.
struct Prepared {
  std::vector<double> x;
  std::vector<std::int64_t> u;
  std::vector<double> fine_offset;
  std::vector<double> cell_mean;  // conditional mean offset per fine index
  std::int64_t clipped = 0;
  double mmse = 0.0;
  double mmse_se = 0.0;
  double quantizer_mse = 0.0;
  double quantizer_se = 0.0;
  double w2_mmse = 0.0;
  std::vector<double> x_unrolled;
};

struct MeanSe {
  double mean;
  double se;
};

MeanSe Summarize(const std::vector<double>& v) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double e : v) {
    sum += e;
    sum_sq += e * e;
  }
  const double n = static_cast<double>(v.size());
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

class Geometry {
 public:
  Geometry(const NestedLatticeSpec& spec, LatticeSource source)
      : spec_(spec), torus_(source == LatticeSource::kUniform) {}

  double Diff(double a, double b) const {
    return torus_ ? WrapCentered(a - b, spec_.shaping_step()) : a - b;
  }
  // Coordinates on the window [lo - delta / 2, hi - delta / 2), which keeps
  // every fine cell of an in-region point contiguous.
  double Unroll(double v) const {
    if (!torus_) return v;
    const double cut = spec_.region_lo() - 0.5 * spec_.delta();
    const double l = spec_.shaping_step();
    return cut + (v - cut - l * std::floor((v - cut) / l));
  }

 private:
  const NestedLatticeSpec& spec_;
  bool torus_;
};

void CheckConfig(const LatticeRunConfig& config) {
  if (config.n_samples < 2) {
    throw ValidationError(fmt::format("n_samples must be >= 2, got {}", config.n_samples));
  }
  if (config.source == LatticeSource::kGaussian &&
      !(config.sigma > 0.0 && std::isfinite(config.sigma))) {
    throw ValidationError(fmt::format("sigma must be finite and > 0, got {}", config.sigma));
  }
  if (config.min_cell_samples < 1) {
    throw ValidationError("min_cell_samples must be >= 1");
  }
}

Prepared Prepare(const NestedLatticeSpec& spec, const LatticeRunConfig& config) {
  CheckConfig(config);
  const Geometry geometry(spec, config.source);
  const bool uniform = config.source == LatticeSource::kUniform;
  const double lo = spec.region_lo();
  const double hi = spec.region_hi();
  const double delta = spec.delta();
  if (!uniform) {
    const boost::math::normal_distribution<double> normal(0.0, config.sigma);
    const double mass = boost::math::cdf(normal, hi) - boost::math::cdf(normal, lo);
    if (!(mass > 1e-6)) {
      throw UnsupportedConfiguration(fmt::format(
          "shaping region [{}, {}) holds only {} of the source mass", lo, hi, mass));
    }
  }

  auto chunks = MapChunks<ChunkSamples>(
      config.n_samples, kChunk, [&](std::int64_t c, std::int64_t begin, std::int64_t end) {
        ChunkSamples out;
        const auto count = static_cast<std::size_t>(end - begin);
        out.x.reserve(count);
        out.u.reserve(count);
        out.fine_offset.reserve(count);
        Rng rng = StreamRng(config.seed, static_cast<std::uint64_t>(c));
        Rng gen = StreamRng(config.seed, kGeneratorStreamBase + static_cast<std::uint64_t>(c));
        for (std::int64_t i = begin; i < end; ++i) {
          double x;
          if (uniform) {
            x = UniformIn(rng, lo, hi);
          } else {
            for (;;) {
              x = config.sigma * StandardNormal(rng);
              if (x >= lo && x < hi) break;
              ++out.clipped;
            }
          }
          const int k = UniformIndex(rng, spec.n());
          const LatticeCodeword cw =
              uniform ? LatticeEncodeTorus(x, k, spec) : LatticeEncode(x, k, spec);
          const double point = cw.point;
          double offset;
          if (uniform) {
            offset = delta * (Uniform01(gen) - 0.5);
          } else {
            const double a = std::max(point - 0.5 * delta, lo);
            const double b = std::min(point + 0.5 * delta, hi);
            offset = TruncatedNormal(gen, config.sigma, a, b) - point;
          }
          out.x.push_back(x);
          out.u.push_back(cw.fine_index);
          out.fine_offset.push_back(offset);
        }
        return out;
      });

  Prepared prep;
  prep.x.reserve(static_cast<std::size_t>(config.n_samples));
  prep.u.reserve(prep.x.capacity());
  prep.fine_offset.reserve(prep.x.capacity());
  for (auto& chunk : chunks) {
    prep.x.insert(prep.x.end(), chunk.x.begin(), chunk.x.end());
    prep.u.insert(prep.u.end(), chunk.u.begin(), chunk.u.end());
    prep.fine_offset.insert(prep.fine_offset.end(), chunk.fine_offset.begin(),
                            chunk.fine_offset.end());
    prep.clipped += chunk.clipped;
  }

  const auto cells = static_cast<std::size_t>(spec.fine_count());
  const std::int64_t first = spec.first_index();
  std::vector<double> sum(cells, 0.0);
  std::vector<std::int64_t> count(cells, 0);
  std::vector<double> quant_err(prep.x.size());
  for (std::size_t i = 0; i < prep.x.size(); ++i) {
    const auto cell = static_cast<std::size_t>(prep.u[i] - first);
    const double d = geometry.Diff(prep.x[i], static_cast<double>(prep.u[i]) * delta);
    sum[cell] += d;
    ++count[cell];
    quant_err[i] = d * d;
  }
  prep.cell_mean.assign(cells, 0.0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (count[cell] == 0) continue;
    if (count[cell] < config.min_cell_samples) {
      throw InsufficientSamples(fmt::format(
          "cell at fine index {} has {} samples, fewer than the {} needed for its "
          "conditional mean; raise n_samples",
          first + static_cast<std::int64_t>(cell), count[cell], config.min_cell_samples));
    }
    prep.cell_mean[cell] = sum[cell] / static_cast<double>(count[cell]);
  }

  std::vector<double> mmse_err(prep.x.size());
  std::vector<double> tilde(prep.x.size());
  prep.x_unrolled.resize(prep.x.size());
  for (std::size_t i = 0; i < prep.x.size(); ++i) {
    const double point = static_cast<double>(prep.u[i]) * delta;
    const double x_tilde = point + prep.cell_mean[static_cast<std::size_t>(prep.u[i] - first)];
    const double e = geometry.Diff(prep.x[i], x_tilde);
    mmse_err[i] = e * e;
    tilde[i] = geometry.Unroll(x_tilde);
    prep.x_unrolled[i] = geometry.Unroll(prep.x[i]);
  }
  const MeanSe mmse = Summarize(mmse_err);
  const MeanSe quant = Summarize(quant_err);
  prep.mmse = mmse.mean;
  prep.mmse_se = mmse.se;
  prep.quantizer_mse = quant.mean;
  prep.quantizer_se = quant.se;
  prep.w2_mmse = W2Quantile1D(prep.x_unrolled, tilde);
  return prep;
}

LatticeTradeoffResult Evaluate(const NestedLatticeSpec& spec, const Prepared& prep,
                               PerceptionConstraint p, const LatticeRunConfig& config) {
  const Geometry geometry(spec, config.source);
  const double delta = spec.delta();
  const std::int64_t first = spec.first_index();
  LatticeTradeoffResult result;
  result.target = p;
  result.alpha = InterpolationWeight(prep.w2_mmse, p);
  std::vector<double> err(prep.x.size());
  std::vector<double> hat(prep.x.size());
  for (std::size_t i = 0; i < prep.x.size(); ++i) {
    const double point = static_cast<double>(prep.u[i]) * delta;
    const double mean = prep.cell_mean[static_cast<std::size_t>(prep.u[i] - first)];
    const double x_hat =
        point + (1.0 - result.alpha) * prep.fine_offset[i] + result.alpha * mean;
    const double e = geometry.Diff(prep.x[i], x_hat);
    err[i] = e * e;
    hat[i] = geometry.Unroll(x_hat);
  }
  const MeanSe d = Summarize(err);
  result.distortion = d.mean;
  result.distortion_std_error = d.se;
  result.perception = W2Quantile1D(prep.x_unrolled, hat);
  result.mmse_distortion = prep.mmse;
  result.mmse_std_error = prep.mmse_se;
  result.mmse_perception = prep.w2_mmse;
  result.quantizer_mse = prep.quantizer_mse;
  result.quantizer_std_error = prep.quantizer_se;
  if (config.source == LatticeSource::kUniform) {
    result.analytic_distortion = LatticeUniformReference(spec, p);
  }
  result.n_samples = static_cast<std::int64_t>(prep.x.size());
  result.clipped = prep.clipped;
  result.seed = config.seed;
  if (config.keep_samples) {
    result.sources = prep.x;
    result.errors.resize(prep.x.size());
    for (std::size_t i = 0; i < prep.x.size(); ++i) {
      result.errors[i] = geometry.Diff(prep.x[i], static_cast<double>(prep.u[i]) * delta);
    }
  }
  return result;
}

}  // namespace

NestedLatticeSpec::NestedLatticeSpec(double delta, int n, int m)
    : delta_(delta), n_(n), m_(m) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError(fmt::format("delta must be finite and > 0, got {}", delta));
  }
  if (n < 1 || m < 1) {
    throw ValidationError(fmt::format("N and M must be >= 1, got N={} M={}", n, m));
  }
  if (static_cast<std::int64_t>(m) * n > (std::int64_t{1} << 30)) {
    throw UnsupportedConfiguration(fmt::format("M N = {} is too large", std::int64_t{m} * n));
  }
}

std::int64_t NestedLatticeSpec::first_index() const { return -(fine_count() / 2); }

bool NestedLatticeSpec::Contains(int level, std::int64_t u) const {
  switch (level) {
    case 1:
      return FloorMod(u, fine_count()) == 0;
    case 2:
      return FloorMod(u, n_) == 0;
    case 3:
      return true;
    default:
      throw DomainError(fmt::format("lattice level must be 1, 2 or 3, got {}", level));
  }
}

int NestedLatticeSpec::CosetOf(std::int64_t u) const {
  return static_cast<int>(FloorMod(u, n_));
}

std::vector<std::int64_t> NestedLatticeSpec::CosetPoints(int k) const {
  CheckCoset(k, *this);
  std::vector<std::int64_t> points;
  points.reserve(static_cast<std::size_t>(m_));
  const std::int64_t start = first_index() + FloorMod(k - first_index(), n_);
  for (int j = 0; j < m_; ++j) points.push_back(start + static_cast<std::int64_t>(j) * n_);
  return points;
}

LatticeCodeword LatticeEncode(double x, int k, const NestedLatticeSpec& spec) {
  CheckCoset(k, spec);
  if (!std::isfinite(x)) throw ValidationError("source value must be finite");
  LatticeCodeword cw;
  cw.clipped = x < spec.region_lo() || x >= spec.region_hi();
  const std::int64_t lowest = spec.first_index() + FloorMod(k - spec.first_index(), spec.n());
  const std::int64_t highest = lowest + static_cast<std::int64_t>(spec.m() - 1) * spec.n();
  cw.fine_index = std::clamp(NearestInCoset(x, k, spec), lowest, highest);
  cw.point = static_cast<double>(cw.fine_index) * spec.delta();
  return cw;
}

LatticeCodeword LatticeEncodeTorus(double x, int k, const NestedLatticeSpec& spec) {
  CheckCoset(k, spec);
  if (!std::isfinite(x)) throw ValidationError("source value must be finite");
  LatticeCodeword cw;
  cw.clipped = x < spec.region_lo() || x >= spec.region_hi();
  const std::int64_t u = NearestInCoset(x, k, spec);
  cw.fine_index = spec.first_index() + FloorMod(u - spec.first_index(), spec.fine_count());
  cw.point = static_cast<double>(cw.fine_index) * spec.delta();
  return cw;
}

double LatticeUniformReference(const NestedLatticeSpec& spec, PerceptionConstraint p) {
  const double h = spec.coarse_step();
  const double fine = spec.delta() * spec.delta() / 12.0;
  return InterpolatedDistortion(h * h / 12.0, fine, p);
}

LatticeTradeoffResult LatticePipeline(const NestedLatticeSpec& spec, PerceptionConstraint p,
                                      const LatticeRunConfig& config) {
  const Prepared prep = Prepare(spec, config);
  return Evaluate(spec, prep, p, config);
}

std::vector<LatticeCurve> CosetSweep(std::span<const NestedLatticeSpec> specs,
                                     std::span<const PerceptionConstraint> grid,
                                     const LatticeRunConfig& config) {
  if (specs.empty()) throw ValidationError("coset sweep needs at least one spec");
  if (grid.empty()) throw ValidationError("coset sweep needs a nonempty perception grid");
  const double step = specs.front().shaping_step();
  for (const auto& spec : specs) {
    if (std::abs(spec.shaping_step() - step) > 1e-12 * step) {
      throw ValidationError(fmt::format(
          "specs must share the shaping step M N delta: {} vs {}", spec.shaping_step(), step));
    }
  }
  std::vector<LatticeCurve> curves;
  for (const auto& spec : specs) {
    const Prepared prep = Prepare(spec, config);
    LatticeCurve curve{spec, {}};
    for (const auto& p : grid) curve.points.push_back(Evaluate(spec, prep, p, config));
    curves.push_back(std::move(curve));
  }
  return curves;
}

ChiSquareResult ChiSquareIndependence(std::span<const double> x, std::span<const double> y,
                                      int bins_x, int bins_y, double x_lo, double x_hi,
                                      double y_lo, double y_hi) {
  if (x.size() != y.size() || x.empty()) {
    throw ValidationError("chi-square test needs equal nonzero sample counts");
  }
  if (bins_x < 2 || bins_y < 2 || !(x_hi > x_lo) || !(y_hi > y_lo)) {
    throw ValidationError("chi-square test needs >= 2 bins per axis and nonempty ranges");
  }
  auto bin = [](double v, double lo, double hi, int bins) {
    const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    return std::clamp(b, 0, bins - 1);
  };
  std::vector<double> table(static_cast<std::size_t>(bins_x) * bins_y, 0.0);
  std::vector<double> rows(static_cast<std::size_t>(bins_x), 0.0);
  std::vector<double> cols(static_cast<std::size_t>(bins_y), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int r = bin(x[i], x_lo, x_hi, bins_x);
    const int c = bin(y[i], y_lo, y_hi, bins_y);
    table[static_cast<std::size_t>(r) * bins_y + c] += 1.0;
    rows[static_cast<std::size_t>(r)] += 1.0;
    cols[static_cast<std::size_t>(c)] += 1.0;
  }
  const double n = static_cast<double>(x.size());
  ChiSquareResult result;
  int used_rows = 0;
  int used_cols = 0;
  for (double r : rows) used_rows += r > 0.0;
  for (double c : cols) used_cols += c > 0.0;
  for (int r = 0; r < bins_x; ++r) {
    if (rows[static_cast<std::size_t>(r)] == 0.0) continue;
    for (int c = 0; c < bins_y; ++c) {
      if (cols[static_cast<std::size_t>(c)] == 0.0) continue;
      const double expected = rows[static_cast<std::size_t>(r)] * cols[static_cast<std::size_t>(c)] / n;
      const double diff = table[static_cast<std::size_t>(r) * bins_y + c] - expected;
      result.statistic += diff * diff / expected;
    }
  }
  result.dof = (used_rows - 1) * (used_cols - 1);
  if (result.dof > 0) {
    const boost::math::chi_squared_distribution<double> chi(result.dof);
    result.p_value = boost::math::cdf(boost::math::complement(chi, result.statistic));
  }
  return result;
}

}  // namespace rdp
