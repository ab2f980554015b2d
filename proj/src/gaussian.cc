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

#include "rdp/gaussian.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rdp/parallel.h"
#include "rdp/random.h"

namespace rdp {
namespace {

constexpr std::uint64_t kSourceStreamBase = std::uint64_t{1} << 40;
constexpr std::int64_t kCodewordChunk = 4096;
constexpr std::int64_t kSourceChunk = 16;

void CheckRate(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ValidationError(fmt::format("{} must be finite and >= 0, got {}", name, value));
  }
}

std::int64_t CodebookSize(int n, double rate) {
  const double exponent = n * rate;
  if (exponent > 40.0) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(std::floor(std::exp2(exponent)));
}

// Unit vector uniform on the sphere S^{n-1}.
void UniformDirection(Rng& rng, std::span<double> out) {
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : out) {
      x = StandardNormal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  const double scale = 1.0 / std::sqrt(norm);
  for (double& x : out) x *= scale;
}

}  // namespace

double GaussianOperationalMse(double rate) {
  CheckRate(rate, "rate");
  return std::exp2(-2.0 * rate);
}

double GaussianVirtualMse(double rate, std::optional<double> common_rate) {
  CheckRate(rate, "rate");
  const double a = std::exp2(-2.0 * rate);
  double b = 0.0;
  if (common_rate) {
    CheckRate(*common_rate, "common rate");
    b = std::exp2(-2.0 * (rate + *common_rate));
  }
  return std::max(0.0, 2.0 - a - 2.0 * std::sqrt((1.0 - a) * (1.0 - b)));
}

double DRcp(const GaussianRdpQuery& query) {
  const double floor = GaussianOperationalMse(query.rate);
  return InterpolatedDistortion(
      floor, GaussianVirtualMse(query.rate, query.common_rate), query.p);
}

SphereSimResult SphereCodebookSim(const SphereSimConfig& config) {
  if (config.n < 1) throw ValidationError("blocklength must be >= 1");
  if (config.n_sources < 1) throw ValidationError("need at least one source point");
  CheckRate(config.rate, "rate");
  CheckRate(config.common_rate, "common rate");
  SphereSimResult result;
  result.codewords_per_seed = CodebookSize(config.n, config.rate);
  result.seeds = CodebookSize(config.n, config.common_rate);
  if (result.codewords_per_seed > kMaxSphereCodewords ||
      result.seeds > kMaxSphereCodewords ||
      result.codewords_per_seed * result.seeds > kMaxSphereCodewords) {
    throw UnsupportedConfiguration(fmt::format(
        "sphere codebook of floor(2^{{{}*{}}}) x floor(2^{{{}*{}}}) codewords "
        "exceeds the cap of {}",
        config.n, config.rate, config.n, config.common_rate, kMaxSphereCodewords));
  }
  const int n = config.n;
  const std::int64_t per_seed = result.codewords_per_seed;
  const std::int64_t total = per_seed * result.seeds;

  // Codeword (j, k) is row k * per_seed + j of a unit-direction table.
  std::vector<double> directions(static_cast<std::size_t>(total) * n);
  MapChunks<char>(total, kCodewordChunk,
                  [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
    Rng rng = StreamRng(config.seed, static_cast<std::uint64_t>(chunk));
    for (std::int64_t c = begin; c < end; ++c) {
      UniformDirection(rng, {directions.data() + c * n, static_cast<std::size_t>(n)});
    }
    return char{0};
  });

  const double a = std::exp2(-2.0 * config.rate);
  const double scale = 2.0 * std::sqrt(1.0 - a);
  auto mse_of = [&](double cosine) { return 2.0 - a - scale * cosine; };

  struct Partial {
    double op = 0.0, op_sq = 0.0;
    double vir = 0.0, vir_sq = 0.0;
    double cos = 0.0, cos_sq = 0.0;
    double vir_cos = 0.0;
    std::int64_t violations = 0;
  };
  const auto partials = MapChunks<Partial>(
      config.n_sources, kSourceChunk,
      [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        Rng rng = StreamRng(config.seed, kSourceStreamBase + chunk);
        std::vector<double> x(n);
        Partial part;
        for (std::int64_t s = begin; s < end; ++s) {
          UniformDirection(rng, x);
          double op = 0.0, cos_mean = 0.0;
          double best_all = -2.0;
          for (std::int64_t k = 0; k < result.seeds; ++k) {
            double best = -2.0;
            const double* row = directions.data() + k * per_seed * n;
            for (std::int64_t j = 0; j < per_seed; ++j, row += n) {
              double dot = 0.0;
              for (int d = 0; d < n; ++d) dot += x[d] * row[d];
              best = std::max(best, dot);
            }
            op += mse_of(best);
            cos_mean += best;
            best_all = std::max(best_all, best);
          }
          op /= static_cast<double>(result.seeds);
          cos_mean /= static_cast<double>(result.seeds);
          const double vir = mse_of(best_all);
          part.op += op;
          part.op_sq += op * op;
          part.vir += vir;
          part.vir_sq += vir * vir;
          part.cos += cos_mean;
          part.cos_sq += cos_mean * cos_mean;
          part.vir_cos += best_all;
          part.violations += vir > op;
        }
        return part;
      });

  Partial sum;
  for (const Partial& p : partials) {
    sum.op += p.op;
    sum.op_sq += p.op_sq;
    sum.vir += p.vir;
    sum.vir_sq += p.vir_sq;
    sum.cos += p.cos;
    sum.cos_sq += p.cos_sq;
    sum.vir_cos += p.vir_cos;
    sum.violations += p.violations;
  }
  const double m = static_cast<double>(config.n_sources);
  auto std_error = [m](double s, double sq) {
    if (m < 2.0) return 0.0;
    const double mean = s / m;
    return std::sqrt(std::max(0.0, (sq - m * mean * mean) / (m - 1.0)) / m);
  };
  result.operational_mse = sum.op / m;
  result.operational_std_error = std_error(sum.op, sum.op_sq);
  result.virtual_mse = sum.vir / m;
  result.virtual_std_error = std_error(sum.vir, sum.vir_sq);
  result.max_cosine = sum.cos / m;
  result.max_cosine_std_error = std_error(sum.cos, sum.cos_sq);
  result.virtual_max_cosine = sum.vir_cos / m;
  result.ordering_violations = sum.violations;
  return result;
}

GaussianUniversalityReport AsymptoticUniversalityCheck(
    double rate, std::optional<double> common_rate,
    std::span<const PerceptionConstraint> grid) {
  if (grid.empty()) throw ValidationError("perception grid is empty");
  GaussianUniversalityReport report;
  report.threshold = GaussianVirtualMse(rate, common_rate);
  for (const auto& p : grid) {
    UniversalityTerm term;
    term.p = p;
    term.floor = GaussianOperationalMse(rate);
    term.interpolation = InterpolatedDistortion(0.0, report.threshold, p);
    term.distortion = DRcp({rate, common_rate, p});
    if (!report.terms.empty()) {
      report.floor_constant &= term.floor == report.terms.front().floor;
    }
    report.terms.push_back(term);
  }
  return report;
}

}  // namespace rdp
