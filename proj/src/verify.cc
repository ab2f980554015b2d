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

#include "rdp/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>
#include <json.hpp>

#include "rdp/circle.h"
#include "rdp/common.h"
#include "rdp/gaussian.h"
#include "rdp/lattice.h"
#include "rdp/quantizer.h"
#include "rdp/random.h"
#include "rdp/transport.h"

namespace rdp {
namespace {

struct CheckSpec {
  std::string name;
  CheckKind kind;
  double target;
  double tolerance;
};

// Name, comparison, target and default tolerance. Measurements come from
// the matching entry in Measure().
const std::vector<CheckSpec>& Specs() {
  static const std::vector<CheckSpec> specs = {
      {"circle.distortion_m2", CheckKind::kEqual, 0.594715265430649, 1e-12},
      {"circle.perception_m2_n2", CheckKind::kEqual, 0.258966398067839, 1e-12},
      {"circle.perception_m2_dither", CheckKind::kEqual, 0.132045189834188, 1e-12},
      {"circle.tradeoff_m2_n1_p0", CheckKind::kEqual, 1.189430530861298, 1e-12},
      {"circle.seed_count_ordering_violations", CheckKind::kAtMost, 0.0, 0.0},
      {"circle.private_vs_common_violations", CheckKind::kAtMost, 0.0, 0.0},
      {"supports.single_seed_arc_radius", CheckKind::kEqual, 0.740656449309578, 5e-4},
      {"supports.dither_arc_radius", CheckKind::kEqual, 0.8, 5e-4},
      {"quantizer.prop1_max_gap", CheckKind::kAtMost, 0.0, 1e-9},
      {"quantizer.posterior_factor_two_max_gap", CheckKind::kAtMost, 0.0, 1e-9},
      {"quantizer.interpolation_formula_max_gap", CheckKind::kAtMost, 0.0, 1e-9},
      {"quantizer.posterior_beats_transport_by", CheckKind::kAtMost, 0.0, 1e-12},
      {"transport.quantile_vs_exact_max_gap", CheckKind::kAtMost, 0.0, 1e-10},
      {"transport.semidiscrete_max_gap", CheckKind::kAtMost, 0.0, 1e-10},
      {"gaussian.drcp_r1_c0_p0", CheckKind::kEqual, 0.5, 1e-12},
      {"lattice.uniform_quantizer_relative_error", CheckKind::kAtMost, 0.0, 0.02},
      {"lattice.single_coset_relative_gap", CheckKind::kAtMost, 0.0, 0.02},
      {"lattice.dither_independence_p_value", CheckKind::kAtLeast, 0.01, 0.0},
  };
  return specs;
}

FiniteDistribution RandomSource(Rng& rng, int dim, int atoms) {
  std::vector<double> coords(static_cast<std::size_t>(dim * atoms));
  for (double& c : coords) c = UniformIn(rng, -1.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(atoms));
  double total = 0.0;
  for (double& w : weights) total += (w = UniformIn(rng, 0.1, 1.0));
  for (double& w : weights) w /= total;
  return FiniteDistribution(dim, std::move(coords), std::move(weights));
}

struct QuantizerStats {
  double prop1 = 0.0;
  double factor_two = 0.0;
  double formula = 0.0;
  double posterior_margin = -INFINITY;
  std::vector<Prop1Row> table;
};

QuantizerStats QuantizerBattery(std::uint64_t seed) {
  QuantizerStats s;
  Rng rng = StreamRng(seed, 101);
  for (int i = 0; i < 20; ++i) {
    const int atoms = 2 + UniformIndex(rng, 7);
    const int m = 1 + i % 3;
    const FiniteDistribution source = RandomSource(rng, 2, atoms);
    const Prop1Check p1 = VerifyProp1(source, m);
    s.prop1 = std::max(s.prop1, std::abs(p1.mse - p1.w2sq));
    s.table.push_back({i, 2, static_cast<int>(source.size()), m, p1.mse, p1.w2sq});
    const PerfectPerceptionCheck pp = PerfectPerceptionMinDistortion(source, m);
    s.factor_two = std::max(s.factor_two, std::abs(pp.twice_mse - pp.posterior_sample));
    const QuantizerDesign design = OptimalMmseQuantizer(source, m);
    const double w2 = W2Exact(source, design.OutputDistribution()).cost;
    for (double frac : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      const auto p = PerceptionConstraint::AtMost(frac * w2);
      const auto ot = InterpolationPipeline(source, design.partition, p,
                                            GeneratorKind::kOptimalTransport);
      const auto post = InterpolationPipeline(source, design.partition, p,
                                              GeneratorKind::kPosteriorSampling);
      s.formula = std::max(
          s.formula, std::abs(ot.achieved_distortion - InterpolatedDistortion(design.mse, w2, p)));
      s.posterior_margin =
          std::max(s.posterior_margin, ot.achieved_distortion - post.achieved_distortion);
    }
  }
  return s;
}

double QuantileVsExact(std::uint64_t seed) {
  Rng rng = StreamRng(seed, 102);
  double gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = RandomSource(rng, 1, 1 + UniformIndex(rng, 12));
    const auto q = RandomSource(rng, 1, 1 + UniformIndex(rng, 12));
    gap = std::max(gap, std::abs(W2Quantile1D(p, q).cost - W2Exact(p, q).cost));
  }
  return gap;
}

double SemidiscreteGap() {
  double gap = 0.0;
  for (int m : {2, 3, 4, 8}) {
    for (int n : {1, 2, 3}) {
      const AngularCode code(m, SeedCount::Finite(n));
      std::vector<double> coords;
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < n; ++k) {
          const Vec2 c = MmseReconstruct(j, k, code);
          coords.push_back(c.x);
          coords.push_back(c.y);
        }
      }
      const double semi = SemidiscreteCircle(FiniteDistribution::Uniform(2, coords));
      // Nearest-atom arcs of width 2 pi / (M N) at radius M sin(pi/M) / pi.
      const double r = m * std::sin(kPi / m) / kPi;
      const double half = kPi / (m * n);
      const double closed = 1.0 + r * r - 2.0 * r * std::sin(half) / half;
      gap = std::max(gap, std::abs(semi - closed));
      if (n == 1) gap = std::max(gap, std::abs(semi - AnalyticDistortion(m)));
    }
  }
  return gap;
}

int SeedCountOrderingViolations() {
  int violations = 0;
  for (int i = 0; i < 25; ++i) {
    const auto p = PerceptionConstraint::AtMost(0.3 * i / 24.0);
    const double d1 = AnalyticTradeoff(2, SeedCount::Finite(1), p);
    const double d2 = AnalyticTradeoff(2, SeedCount::Finite(2), p);
    const double dinf = AnalyticTradeoff(2, SeedCount::ContinuousDither(), p);
    violations += dinf > d2 + 1e-12;
    violations += d2 > d1 + 1e-12;
  }
  return violations;
}

int PrivateVsCommonViolations() {
  int violations = 0;
  for (int i = 0; i < 25; ++i) {
    const auto p = PerceptionConstraint::AtMost(0.3 * i / 24.0);
    violations += AnalyticTradeoff(4, SeedCount::Finite(1), p) >
                  AnalyticTradeoff(2, SeedCount::Finite(2), p) + 1e-12;
  }
  return violations;
}

struct LatticeStats {
  double uniform_rel = 0.0;
  double coset_rel = 0.0;
  double p_value = 0.0;
};

LatticeStats LatticeBattery(std::uint64_t seed) {
  LatticeStats s;
  LatticeRunConfig config;
  config.n_samples = 200000;
  config.seed = seed;
  for (int n : {1, 2, 4}) {
    const NestedLatticeSpec spec(0.5, n, 4);
    const auto r = LatticePipeline(spec, PerceptionConstraint::Unconstrained(), config);
    const double h = spec.coarse_step();
    s.uniform_rel = std::max(s.uniform_rel, std::abs(r.quantizer_mse / (h * h / 12.0) - 1.0));
  }
  for (auto source : {LatticeSource::kUniform, LatticeSource::kGaussian}) {
    LatticeRunConfig c = config;
    c.source = source;
    c.n_samples = 300000;
    const auto r = LatticePipeline(NestedLatticeSpec(0.5, 1, 12),
                                   PerceptionConstraint::Unconstrained(), c);
    s.coset_rel = std::max(s.coset_rel,
                           std::abs(r.mmse_perception - r.mmse_distortion) / r.mmse_distortion);
  }
  const NestedLatticeSpec wide(1.0 / 64.0, 64, 4);
  LatticeRunConfig c = config;
  c.keep_samples = true;
  const auto r = LatticePipeline(wide, PerceptionConstraint::Unconstrained(), c);
  const double h = wide.coarse_step();
  s.p_value = ChiSquareIndependence(r.sources, r.errors, 8, 8, wide.region_lo(),
                                    wide.region_hi(), -0.5 * h, 0.5 * h)
                  .p_value;
  return s;
}

const char* KindName(CheckKind kind) {
  switch (kind) {
    case CheckKind::kEqual: return "equal";
    case CheckKind::kAtMost: return "at_most";
    case CheckKind::kAtLeast: return "at_least";
  }
  return "";
}

bool Passes(CheckKind kind, double measured, double target, double tol) {
  if (!std::isfinite(measured)) return false;
  switch (kind) {
    case CheckKind::kEqual: return std::abs(measured - target) <= tol;
    case CheckKind::kAtMost: return measured <= target + tol;
    case CheckKind::kAtLeast: return measured >= target - tol;
  }
  return false;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> names;
  for (const auto& c : checks) {
    if (!c.passed) names.push_back(c.name);
  }
  return names;
}

std::map<std::string, double> DefaultTolerances() {
  std::map<std::string, double> t;
  for (const auto& s : Specs()) t[s.name] = s.tolerance;
  return t;
}

VerifyReport RunVerify(std::uint64_t seed, const std::map<std::string, double>& overrides) {
  auto tolerances = DefaultTolerances();
  for (const auto& [name, value] : overrides) {
    if (!tolerances.contains(name)) {
      throw ValidationError(fmt::format("unknown check '{}' in tolerance override", name));
    }
    tolerances[name] = value;
  }

  const QuantizerStats q = QuantizerBattery(seed);
  const LatticeStats l = LatticeBattery(seed);
  const auto supports_p = PerceptionConstraint::AtMost(0.04);
  const std::map<std::string, double> measured = {
      {"circle.distortion_m2", AnalyticDistortion(2)},
      {"circle.perception_m2_n2", AnalyticPerception(2, SeedCount::Finite(2))},
      {"circle.perception_m2_dither", AnalyticPerception(2, SeedCount::ContinuousDither())},
      {"circle.tradeoff_m2_n1_p0",
       AnalyticTradeoff(2, SeedCount::Finite(1), PerceptionConstraint::AtMost(0.0))},
      {"circle.seed_count_ordering_violations", SeedCountOrderingViolations()},
      {"circle.private_vs_common_violations", PrivateVsCommonViolations()},
      {"supports.single_seed_arc_radius",
       Supports(AngularCode(2, SeedCount::Finite(1)), supports_p).arc_radius},
      {"supports.dither_arc_radius",
       Supports(AngularCode(2, SeedCount::ContinuousDither()), supports_p).arc_radius},
      {"quantizer.prop1_max_gap", q.prop1},
      {"quantizer.posterior_factor_two_max_gap", q.factor_two},
      {"quantizer.interpolation_formula_max_gap", q.formula},
      {"quantizer.posterior_beats_transport_by", q.posterior_margin},
      {"transport.quantile_vs_exact_max_gap", QuantileVsExact(seed)},
      {"transport.semidiscrete_max_gap", SemidiscreteGap()},
      {"gaussian.drcp_r1_c0_p0", DRcp({1.0, 0.0, PerceptionConstraint::AtMost(0.0)})},
      {"lattice.uniform_quantizer_relative_error", l.uniform_rel},
      {"lattice.single_coset_relative_gap", l.coset_rel},
      {"lattice.dither_independence_p_value", l.p_value},
  };

  VerifyReport report;
  report.seed = seed;
  report.prop1_table = q.table;
  for (const auto& s : Specs()) {
    CheckResult c;
    c.name = s.name;
    c.kind = s.kind;
    c.target = s.target;
    c.tolerance = tolerances.at(s.name);
    c.measured = measured.at(s.name);
    c.passed = Passes(c.kind, c.measured, c.target, c.tolerance);
    c.detail = fmt::format("{} {} {} (tolerance {})", c.measured, KindName(c.kind), c.target,
                           c.tolerance);
    report.checks.push_back(std::move(c));
  }
  return report;
}

std::string ReportJson(const VerifyReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["passed"] = report.passed();
  j["failures"] = report.failures();
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"kind", KindName(c.kind)},
                      {"target", c.target},
                      {"tolerance", c.tolerance},
                      {"measured", c.measured},
                      {"passed", c.passed}});
  }
  auto& table = j["prop1_table"] = nlohmann::ordered_json::array();
  for (const auto& r : report.prop1_table) {
    table.push_back({{"source", r.source},
                     {"dim", r.dim},
                     {"atoms", r.atoms},
                     {"m", r.m},
                     {"mse", r.mse},
                     {"w2_squared", r.w2sq},
                     {"gap", std::abs(r.mse - r.w2sq)}});
  }
  return j.dump(2) + "\n";
}

}  // namespace rdp
