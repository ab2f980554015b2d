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

#ifndef RDP_EXPERIMENTS_H_
#define RDP_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdp/circle.h"
#include "rdp/common.h"
#include "rdp/csv.h"
#include "rdp/gaussian.h"
#include "rdp/lattice.h"
#include "rdp/svg.h"

namespace rdp {

inline constexpr const char* kExperimentNames[] = {
    "circle-curves", "info-vs-common", "supports", "gaussian", "lattice-sweep", "verify"};

// Settings for one experiment. Lists hold one entry per curve or grid axis;
// an empty common rate means unlimited common randomness.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  std::int64_t samples = 100000;
  std::int64_t perception_samples = 1000;
  std::vector<PerceptionConstraint> p_grid;
  std::vector<int> m;
  std::vector<SeedCount> n;
  std::vector<double> rate;
  std::vector<std::optional<double>> common_rate;
  std::vector<int> sphere_n;
  double sphere_rate = 0.5;
  double sphere_common_rate = 0.25;
  std::int64_t sphere_sources = 2000;
  double lattice_shaping = 4.0;  // M N delta, shared by every curve
  LatticeSource lattice_source = LatticeSource::kUniform;
  std::map<std::string, double> tolerances;  // verify overrides by check name
};

// Defaults for the named experiment. Throws ValidationError for unknown
// names.
ExperimentConfig DefaultConfig(std::string_view experiment);

// Applies one key = value setting. Keys: seed, out, samples,
// perception_samples, p_grid, m, n, rate, common_rate, sphere_n,
// sphere_rate, sphere_common_rate, sphere_sources, lattice_shaping,
// lattice_source, tolerance.<check>.
void ApplySetting(ExperimentConfig& config, std::string_view key,
                  std::string_view value);

// Reads "key = value" lines; '#' starts a comment. Throws IoError when the
// file cannot be read and ValidationError on malformed lines.
void LoadConfigFile(ExperimentConfig& config, const std::filesystem::path& path);

// Checks that the parameters the experiment uses are valid.
void ValidateConfig(const ExperimentConfig& config);

// Perception grid: comma-separated items, each a level, "inf", or an
// inclusive range "a:b:step". Throws ValidationError when empty or malformed.
std::vector<PerceptionConstraint> ParsePGrid(std::string_view text);

// Comma-separated list of integers, seed counts (integer or "inf") or
// rates.
std::vector<int> ParseIntList(std::string_view text);
std::vector<SeedCount> ParseSeedCountList(std::string_view text);
std::vector<double> ParseDoubleList(std::string_view text);
std::vector<std::optional<double>> ParseCommonRateList(std::string_view text);

double PerceptionValue(PerceptionConstraint p);  // +inf when unconstrained

struct CurveOutput {
  std::vector<CurveRecord> records;
  SvgPlot plot;
};

// Analytic and Monte Carlo curves for M = m[0] and every N in n.
CurveOutput RunCircleCurves(const ExperimentConfig& config);

struct InfoVsCommonOutput {
  CurveOutput curves;
  // Grid points where the private-rate scheme (M=4, N=1) is worse than the
  // common-randomness scheme (M=2, N=2) beyond 1e-12.
  std::vector<double> ordering_violations;
};
InfoVsCommonOutput RunInfoVsCommon(const ExperimentConfig& config);

struct SupportRow {
  int m = 0;
  SeedCount n = SeedCount::Finite(1);
  double p = 0.0;
  std::string kind;  // "centroid" or "arc_center"
  double x = 0.0;
  double y = 0.0;
  double mmse_radius = 0.0;
  double arc_radius = 0.0;
  double arc_half_width = 0.0;
  double alpha = 1.0;
};
std::vector<SupportRow> RunSupports(const ExperimentConfig& config);
std::vector<std::string> SupportHeader();
std::vector<std::vector<std::string>> SupportTable(const std::vector<SupportRow>& rows);

struct SphereRow {
  SphereSimConfig config;
  SphereSimResult result;
  double operational_target = 0.0;
  double virtual_target = 0.0;
};
struct GaussianOutput {
  CurveOutput curves;
  std::vector<SphereRow> sphere;
  SvgPlot sphere_plot;
};
GaussianOutput RunGaussian(const ExperimentConfig& config);
std::vector<std::string> SphereHeader();
std::vector<std::vector<std::string>> SphereTable(const std::vector<SphereRow>& rows);

CurveOutput RunLatticeSweep(const ExperimentConfig& config);

}  // namespace rdp

#endif  // RDP_EXPERIMENTS_H_
