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

// rdp_lab: reproduces the circle, Gaussian and lattice experiments and runs
// the verification suite. Every subcommand writes CSV (and SVG where there
// is a curve) into --out.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rdp/csv.h"
#include "rdp/experiments.h"
#include "rdp/svg.h"
#include "rdp/verify.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Overrides {
  std::string config;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
      {"seed", std::nullopt},   {"out", std::nullopt}, {"samples", std::nullopt},
      {"p_grid", std::nullopt}, {"m", std::nullopt},   {"n", std::nullopt},
      {"rate", std::nullopt},   {"common_rate", std::nullopt}};
};

rdp::ExperimentConfig BuildConfig(const std::string& experiment, const Overrides& o) {
  rdp::ExperimentConfig config = rdp::DefaultConfig(experiment);
  if (!o.config.empty()) rdp::LoadConfigFile(config, o.config);
  for (const auto& [key, value] : o.flags) {
    if (value) rdp::ApplySetting(config, key, *value);
  }
  rdp::ValidateConfig(config);
  return config;
}

void WriteCurves(const rdp::ExperimentConfig& config, const std::string& stem,
                 const rdp::CurveOutput& curves) {
  rdp::WriteCurveFile(config.out / (stem + ".csv"), curves.records);
  rdp::WriteTextFile(config.out / (stem + ".svg"), rdp::RenderSvg(curves.plot));
  fmt::print("wrote {} rows to {}\n", curves.records.size(),
             (config.out / (stem + ".csv")).string());
}

int Run(const std::string& experiment, const Overrides& overrides) {
  const rdp::ExperimentConfig config = BuildConfig(experiment, overrides);
  if (experiment == "circle-curves") {
    WriteCurves(config, "circle_curves", rdp::RunCircleCurves(config));
  } else if (experiment == "info-vs-common") {
    const auto out = rdp::RunInfoVsCommon(config);
    WriteCurves(config, "info_vs_common", out.curves);
    if (!out.ordering_violations.empty()) {
      fmt::print(stderr, "ordering violated at {} grid points\n", out.ordering_violations.size());
      return kExitFailure;
    }
    fmt::print("ordering D(M=4,N=1) <= D(M=2,N=2) holds at all {} grid points\n",
               config.p_grid.size());
  } else if (experiment == "supports") {
    const auto rows = rdp::RunSupports(config);
    rdp::WriteTableFile(config.out / "supports.csv", rdp::SupportHeader(),
                        rdp::SupportTable(rows));
    fmt::print("wrote {} rows to {}\n", rows.size(), (config.out / "supports.csv").string());
  } else if (experiment == "gaussian") {
    const auto out = rdp::RunGaussian(config);
    WriteCurves(config, "gaussian", out.curves);
    rdp::WriteTableFile(config.out / "gaussian_sphere.csv", rdp::SphereHeader(),
                        rdp::SphereTable(out.sphere));
    rdp::WriteTextFile(config.out / "gaussian_sphere.svg", rdp::RenderSvg(out.sphere_plot));
    for (const auto& row : out.sphere) {
      fmt::print("n={}: operational {:.6f} (target {:.6f}), virtual {:.6f} (target {:.6f})\n",
                 row.config.n, row.result.operational_mse, row.operational_target,
                 row.result.virtual_mse, row.virtual_target);
    }
  } else if (experiment == "lattice-sweep") {
    WriteCurves(config, "lattice_sweep", rdp::RunLatticeSweep(config));
  } else if (experiment == "verify") {
    const auto report = rdp::RunVerify(config.seed, config.tolerances);
    rdp::WriteTextFile(config.out / "verify.json", rdp::ReportJson(report));
    for (const auto& check : report.checks) {
      fmt::print("{} {}: {}\n", check.passed ? "PASS" : "FAIL", check.name, check.detail);
    }
    if (!report.passed()) return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-distortion-perception experiments with limited common randomness"};
  app.require_subcommand(1);
  Overrides overrides;
  app.add_option("--config", overrides.config, "key = value config file");
  const char* help[] = {"RNG seed (unsigned 64-bit)",
                        "output directory",
                        "Monte Carlo sample count",
                        "perception grid: a, a:b:step, or comma list (inf allowed)",
                        "codebook size M (comma list)",
                        "seed count N, integer or inf (comma list)",
                        "rate R in bits (comma list)",
                        "common rate C in bits, inf for unlimited (comma list)"};
  const char* names[] = {"--seed", "--out", "--samples", "--p-grid",
                         "--m",    "--n",   "--rate",    "--common-rate"};
  for (std::size_t i = 0; i < overrides.flags.size(); ++i) {
    app.add_option_function<std::string>(
        names[i], [&overrides, i](const std::string& v) { overrides.flags[i].second = v; },
        help[i]);
  }
  app.fallthrough();
  std::string chosen;
  for (const char* name : rdp::kExperimentNames) {
    app.add_subcommand(name)->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return Run(chosen, overrides);
  } catch (const rdp::IoError& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid configuration: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
}
