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

// Acceptance driver: one PASS/FAIL line per criterion, detail lines indented
// below it. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rdp/circle.h"
#include "rdp/experiments.h"
#include "rdp/gaussian.h"
#include "rdp/lattice.h"
#include "rdp/quantizer.h"
#include "rdp/random.h"
#include "rdp/transport.h"

namespace rdp {
namespace {

// 30-digit evaluations of the closed forms.
constexpr double kDistortionM2 = 0.594715265430648914224482147161;     // 1 - 4/pi^2
constexpr double kPerceptionM2N2 = 0.258966398067838560043729573773;   // 1 - 4(2 sqrt2 - 1)/pi^2
constexpr double kPerceptionM2Dither = 0.132045189834188399624447745859;  // 1 - 4/pi + 4/pi^2
constexpr double kTradeoffM2N1P0 = 1.18943053086129782844896429432;    // 2 - 8/pi^2

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void Check(bool ok, std::string line) {
    passed = passed && ok;
    details.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", line));
  }
};

PerceptionConstraint AtMost(double p) { return PerceptionConstraint::AtMost(p); }
const auto kUnconstrained = PerceptionConstraint::Unconstrained();

std::string PLabel(PerceptionConstraint p) {
  return p.constrained() ? fmt::format("{}", p.level()) : "inf";
}

Outcome ClosedForms() {
  Outcome o;
  auto anchor = [&](const char* name, double value, double exact) {
    o.Check(std::abs(value - exact) <= 1e-12,
            fmt::format("{} = {:.15f}, reference {:.15f}", name, value, exact));
  };
  anchor("analytic_distortion(2)", AnalyticDistortion(2), kDistortionM2);
  anchor("analytic_perception(2,2)", AnalyticPerception(2, SeedCount::Finite(2)), kPerceptionM2N2);
  anchor("analytic_perception(2,inf)", AnalyticPerception(2, SeedCount::ContinuousDither()),
         kPerceptionM2Dither);
  anchor("analytic_tradeoff(2,1,0)", AnalyticTradeoff(2, SeedCount::Finite(1), AtMost(0.0)),
         kTradeoffM2N1P0);
  return o;
}

struct McRun {
  int m;
  SeedCount n;
  PerceptionConstraint p;
  TradeoffPoint point;
  double analytic;
};

std::vector<McRun> MonteCarloRuns() {
  std::vector<McRun> runs;
  const std::vector<std::pair<int, SeedCount>> schemes = {{2, SeedCount::Finite(1)},
                                                          {2, SeedCount::Finite(2)},
                                                          {4, SeedCount::Finite(1)},
                                                          {2, SeedCount::ContinuousDither()}};
  std::uint64_t seed = 1000;
  for (const auto& [m, n] : schemes) {
    for (const auto& p : {AtMost(0.0), AtMost(0.04), AtMost(0.2), kUnconstrained}) {
      MonteCarloOptions options;
      options.samples = 1'000'000;
      options.perception_samples = 2000;
      options.seed = ++seed;
      const AngularCode code(m, n);
      runs.push_back({m, n, p, MonteCarloSchemeEval(code, p, options),
                      AnalyticTradeoff(m, n, p)});
    }
  }
  return runs;
}

Outcome MonteCarloAgreement(const std::vector<McRun>& runs) {
  Outcome o;
  for (const auto& r : runs) {
    const double gap = std::abs(r.point.distortion - r.analytic);
    o.Check(gap <= 4.0 * r.point.distortion_std_error,
            fmt::format("M={} N={} P={}: D_mc={:.6f} D={:.6f} |gap|={:.2e} <= 4 SE={:.2e}", r.m,
                        r.n.ToString(), PLabel(r.p), r.point.distortion, r.analytic, gap,
                        4.0 * r.point.distortion_std_error));
  }
  return o;
}

// Largest squared W2 between two independent 2000-point samples of the
// uniform circle over repeated runs.
double CalibrationFloor() {
  double floor = 0.0;
  for (std::uint64_t run = 0; run < 10; ++run) {
    Rng rng = StreamRng(77, run);
    std::vector<Vec2> a(2000);
    std::vector<Vec2> b(2000);
    for (auto& v : a) v = Vec2::Polar(1.0, UniformIn(rng, 0.0, kTwoPi));
    for (auto& v : b) v = Vec2::Polar(1.0, UniformIn(rng, 0.0, kTwoPi));
    floor = std::max(floor, W2Empirical(a, b));
  }
  return floor;
}

Outcome PerceptionFeasibility(const std::vector<McRun>& runs) {
  Outcome o;
  const double floor = CalibrationFloor();
  o.details.push_back(fmt::format("calibration floor (max of 10 self-distance runs) = {:.5f}", floor));
  for (const auto& r : runs) {
    const double w2 = r.point.perception.value_or(INFINITY);
    const double bound = r.p.constrained() ? r.p.level() + floor : INFINITY;
    o.Check(w2 <= bound, fmt::format("M={} N={} P={}: W2^2={:.5f} <= {:.5f}", r.m, r.n.ToString(),
                                     PLabel(r.p), w2, bound));
  }
  return o;
}

Outcome FigureOrderings() {
  Outcome o;
  int weak = 0;
  int strict = 0;
  int strict_expected = 0;
  int fig8 = 0;
  const double floor2 = AnalyticPerception(2, SeedCount::Finite(2));
  const double floor1 = AnalyticPerception(2, SeedCount::Finite(1));
  for (int i = 0; i < 25; ++i) {
    const auto p = AtMost(0.025 * i);
    const double d1 = AnalyticTradeoff(2, SeedCount::Finite(1), p);
    const double d2 = AnalyticTradeoff(2, SeedCount::Finite(2), p);
    const double dinf = AnalyticTradeoff(2, SeedCount::ContinuousDither(), p);
    weak += dinf > d2 + 1e-12;
    weak += d2 > d1 + 1e-12;
    if (p.level() < floor2) {
      ++strict_expected;
      strict += dinf < d2 - 1e-12;
    }
    if (p.level() < floor1) {
      ++strict_expected;
      strict += d2 < d1 - 1e-12;
    }
    fig8 += AnalyticTradeoff(4, SeedCount::Finite(1), p) > d2 + 1e-12;
  }
  o.Check(weak == 0, fmt::format("D(N=inf) <= D(N=2) <= D(N=1) on 25 points: {} violations", weak));
  o.Check(strict == strict_expected,
          fmt::format("strict below the perception floors: {}/{}", strict, strict_expected));
  o.Check(fig8 == 0, fmt::format("D(M=4,N=1) <= D(M=2,N=2) on 25 points: {} violations", fig8));
  return o;
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

Outcome PropositionSuite() {
  Outcome o;
  std::vector<std::pair<FiniteDistribution, int>> battery;
  // All uniform sources on subsets of {0, ..., 6} with 1 to 5 atoms.
  for (int mask = 1; mask < (1 << 7); ++mask) {
    if (__builtin_popcount(mask) > 5) continue;
    std::vector<double> points;
    for (int b = 0; b < 7; ++b) {
      if (mask & (1 << b)) points.push_back(b);
    }
    for (int m = 1; m <= 3; ++m) battery.emplace_back(FiniteDistribution::Uniform(1, points), m);
  }
  const std::size_t grid_cases = battery.size();
  Rng rng = StreamRng(2024, 0);
  for (int i = 0; i < 20; ++i) {
    battery.emplace_back(RandomSource(rng, 2, 2 + UniformIndex(rng, 7)), 1 + i % 3);
  }
  double prop1 = 0.0;
  double prop2 = 0.0;
  double prop3 = 0.0;
  double beaten_by = -INFINITY;
  for (const auto& [source, m] : battery) {
    const Prop1Check p1 = VerifyProp1(source, m);
    prop1 = std::max(prop1, std::abs(p1.mse - p1.w2sq));
    const PerfectPerceptionCheck pp = PerfectPerceptionMinDistortion(source, m);
    prop2 = std::max(prop2, std::abs(pp.twice_mse - pp.posterior_sample));
    const QuantizerDesign design = OptimalMmseQuantizer(source, m);
    const double w2 = W2Exact(source, design.OutputDistribution()).cost;
    const auto ot = OptimalTransportGenerator(source, design);
    const auto post = PosteriorGenerator(source, design);
    const auto mix = [&] {
      std::vector<double> out(ot.size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (ot[i] + post[i]);
      return out;
    }();
    for (double frac : {0.0, 0.1, 0.5, 1.0, 1.5}) {
      const auto p = AtMost(frac * w2);
      const auto pipeline =
          InterpolationPipeline(source, design.partition, p, GeneratorKind::kOptimalTransport);
      const double formula = InterpolatedDistortion(design.mse, w2, p);
      prop3 = std::max(prop3, std::abs(pipeline.achieved_distortion - formula));
      for (const auto* gen : {&ot, &post, &mix}) {
        for (int a = 0; a <= 20; ++a) {
          const auto eval = EvaluateInterpolationDecoder(source, design, *gen, a / 20.0);
          if (eval.perception <= p.level() + 1e-9) {
            beaten_by = std::max(beaten_by, formula - eval.distortion);
          }
        }
      }
    }
  }
  o.details.push_back(fmt::format("{} grid cases + 20 random 2-D sources", grid_cases));
  o.Check(prop1 <= 1e-9, fmt::format("max |mse - W2^2(p_X, p_X~)| = {:.2e}", prop1));
  o.Check(prop2 <= 1e-9, fmt::format("max |posterior sampling D - 2 mse| = {:.2e}", prop2));
  o.Check(prop3 <= 1e-9, fmt::format("max |OT interpolation D - formula| = {:.2e}", prop3));
  o.Check(beaten_by <= 1e-9,
          fmt::format("best margin of a tested decoder below the formula = {:.2e}", beaten_by));
  return o;
}

Outcome SupportGeometryCheck() {
  Outcome o;
  const auto rows = RunSupports(DefaultConfig("supports"));
  auto round3 = [](double v) { return std::round(std::abs(v) * 1000.0) / 1000.0; };
  auto expect = [&](const std::string& what, double value, double caption) {
    o.Check(round3(value) == caption,
            fmt::format("{}: {:.6f} -> {:.3f} (caption {:.3f})", what, value, round3(value), caption));
  };
  for (const auto& r : rows) {
    const std::string scheme = fmt::format("M={} N={}", r.m, r.n.ToString());
    const double norm = std::hypot(r.x, r.y);
    if (r.m == 2 && r.n.ToString() == "1" && r.kind == "arc_center") {
      expect(scheme + " arc radius", r.arc_radius, 0.741);
      expect(scheme + " arc center", norm, 0.165);
    } else if (r.m == 2 && r.n.ToString() == "2" && r.kind == "arc_center") {
      expect(scheme + " arc radius", r.arc_radius, 0.607);
      expect(scheme + " arc center", norm, 0.250);
    } else if (r.m == 4 && r.kind == "centroid") {
      expect(scheme + " centroid", norm, 0.900);
    } else if (r.m == 4 && r.kind == "arc_center") {
      expect(scheme + " arc radius", r.arc_radius, 0.540);
      expect(scheme + " arc center", norm, 0.414);
    } else if (r.n.continuous()) {
      expect(scheme + " reconstruction radius", r.arc_radius, 0.8);
    }
  }
  return o;
}

Outcome GaussianCheck() {
  Outcome o;
  for (double r : {0.5, 1.0, 2.0}) {
    const double d = DRcp({r, 0.0, AtMost(0.0)});
    o.Check(std::abs(d - std::exp2(1.0 - 2.0 * r)) <= 1e-12,
            fmt::format("D(R={},0,0) = {:.15f}", r, d));
  }
  int violations = 0;
  int points = 0;
  const std::vector<std::optional<double>> cs = {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, std::nullopt};
  for (int i = 0; i <= 20; ++i) {
    const double r = 0.1 * i;
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      for (int pi = 0; pi <= 20; ++pi) {
        const auto p = AtMost(0.1 * pi);
        const double d = DRcp({r, cs[ci], p});
        ++points;
        if (i > 0) violations += d > DRcp({r - 0.1, cs[ci], p}) + 1e-12;
        if (ci > 0) violations += d > DRcp({r, cs[ci - 1], p}) + 1e-12;
        if (pi > 0) violations += d > DRcp({r, cs[ci], AtMost(0.1 * (pi - 1))}) + 1e-12;
      }
    }
  }
  o.Check(violations == 0,
          fmt::format("monotone in R, C and P on {} grid points: {} violations", points, violations));
  const double op_target = GaussianOperationalMse(0.5);
  const double vir_target = GaussianVirtualMse(0.5, 0.25);
  double previous_gap = INFINITY;
  for (int n : {16, 24}) {
    const SphereSimResult sim = SphereCodebookSim({n, 0.5, 0.25, 2000, 1});
    const double op_rel = std::abs(sim.operational_mse / op_target - 1.0);
    const double vir_rel = std::abs(sim.virtual_mse / vir_target - 1.0);
    o.Check(sim.ordering_violations == 0 && sim.virtual_mse <= sim.operational_mse,
            fmt::format("n={}: virtual <= operational on all {} sources", n, 2000));
    const double gap = op_rel + vir_rel;
    o.Check(gap < previous_gap, fmt::format("n={}: combined relative gap {:.4f} shrinks with n", n, gap));
    previous_gap = gap;
    if (n == 24) {
      o.Check(op_rel <= 0.10, fmt::format("n=24 operational {:.5f} vs {:.5f}: {:+.2f}% (limit 10%)",
                                          sim.operational_mse, op_target,
                                          100.0 * (sim.operational_mse / op_target - 1.0)));
      o.Check(vir_rel <= 0.10, fmt::format("n=24 virtual {:.5f} vs {:.5f}: {:+.2f}% (limit 10%)",
                                           sim.virtual_mse, vir_target,
                                           100.0 * (sim.virtual_mse / vir_target - 1.0)));
    }
  }
  return o;
}

Outcome TransportCheck() {
  Outcome o;
  Rng rng = StreamRng(31, 0);
  double quantile = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = RandomSource(rng, 1, 1 + UniformIndex(rng, 12));
    const auto q = RandomSource(rng, 1, 1 + UniformIndex(rng, 12));
    quantile = std::max(quantile, std::abs(W2Quantile1D(p, q).cost - W2Exact(p, q).cost));
  }
  o.Check(quantile <= 1e-10, fmt::format("quantile vs exact on 100 instances: {:.2e}", quantile));
  double asym = 0.0;
  double triangle = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const auto a = RandomSource(rng, 2, 1 + UniformIndex(rng, 10));
    const auto b = RandomSource(rng, 2, 1 + UniformIndex(rng, 10));
    const auto c = RandomSource(rng, 2, 1 + UniformIndex(rng, 10));
    const double ab = W2Exact(a, b).cost;
    asym = std::max(asym, std::abs(ab - W2Exact(b, a).cost));
    triangle = std::max(triangle, std::sqrt(W2Exact(a, c).cost) -
                                      std::sqrt(ab) - std::sqrt(W2Exact(b, c).cost));
  }
  o.Check(asym <= 1e-10, fmt::format("symmetry on 100 pairs: {:.2e}", asym));
  o.Check(triangle <= 1e-10, fmt::format("triangle inequality on 100 triples: worst excess {:.2e}", triangle));
  auto centroids = [](int m, int n) {
    std::vector<double> coords;
    const AngularCode code(m, SeedCount::Finite(n));
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec2 v = MmseReconstruct(j, k, code);
        coords.push_back(v.x);
        coords.push_back(v.y);
      }
    }
    return FiniteDistribution::Uniform(2, coords);
  };
  const double two = SemidiscreteCircle(centroids(2, 1));
  const double four = SemidiscreteCircle(centroids(2, 2));
  o.Check(std::abs(two - kDistortionM2) <= 1e-10,
          fmt::format("uniform circle vs two centroids: {:.15f}", two));
  o.Check(std::abs(four - kPerceptionM2N2) <= 1e-10,
          fmt::format("uniform circle vs four two-seed centroids: {:.15f}", four));
  return o;
}

Outcome LatticeCheck() {
  Outcome o;
  LatticeRunConfig config;
  config.n_samples = 200000;
  config.seed = 9;
  for (int n : {1, 2, 4}) {
    const NestedLatticeSpec spec(0.5, n, 4);
    const auto r = LatticePipeline(spec, kUnconstrained, config);
    const double h = spec.coarse_step();
    const double rel = r.quantizer_mse / (h * h / 12.0) - 1.0;
    o.Check(std::abs(rel) <= 0.02, fmt::format("N={} uniform quantizer MSE {:.6f} vs (N delta)^2/12 "
                                               "= {:.6f}: {:+.3f}%",
                                               n, r.quantizer_mse, h * h / 12.0, 100.0 * rel));
  }
  for (auto source : {LatticeSource::kUniform, LatticeSource::kGaussian}) {
    LatticeRunConfig c = config;
    c.source = source;
    c.n_samples = 300000;
    const NestedLatticeSpec spec(0.5, 1, 12);
    const auto r = LatticePipeline(spec, kUnconstrained, c);
    // Estimator floor: quantile W2 between two independent source samples.
    double floor = 0.0;
    for (std::uint64_t run = 0; run < 5; ++run) {
      Rng rng = StreamRng(500 + run, 0);
      std::vector<double> a(static_cast<std::size_t>(c.n_samples));
      std::vector<double> b(a.size());
      for (auto* v : {&a, &b}) {
        for (double& x : *v) {
          if (source == LatticeSource::kUniform) {
            x = UniformIn(rng, spec.region_lo(), spec.region_hi());
          } else {
            do x = StandardNormal(rng);
            while (x < spec.region_lo() || x >= spec.region_hi());
          }
        }
      }
      floor = std::max(floor, W2Quantile1D(a, b));
    }
    const double tol = 4.0 * r.mmse_std_error + floor;
    o.Check(std::abs(r.mmse_perception - r.mmse_distortion) <= tol,
            fmt::format("N=1 {} source: W2^2 {:.6f} vs mse {:.6f} (tolerance {:.2e})",
                        source == LatticeSource::kUniform ? "uniform" : "gaussian",
                        r.mmse_perception, r.mmse_distortion, tol));
  }
  const NestedLatticeSpec wide(1.0 / 64.0, 64, 4);
  LatticeRunConfig c = config;
  c.keep_samples = true;
  const auto r = LatticePipeline(wide, kUnconstrained, c);
  const double h = wide.coarse_step();
  const auto chi = ChiSquareIndependence(r.sources, r.errors, 8, 8, wide.region_lo(),
                                         wide.region_hi(), -0.5 * h, 0.5 * h);
  o.Check(chi.p_value > 0.01, fmt::format("N=64 error independence: chi2={:.2f} dof={} p={:.3f}",
                                          chi.statistic, chi.dof, chi.p_value));
  return o;
}

}  // namespace
}  // namespace rdp

int main() {
  using namespace rdp;
  struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> run;
  };
  std::vector<McRun> runs;
  const std::vector<Criterion> criteria = {
      {1, "closed-form anchors", ClosedForms},
      {2, "Monte Carlo vs analytic tradeoff",
       [&] {
         runs = MonteCarloRuns();
         return MonteCarloAgreement(runs);
       }},
      {3, "perception feasibility", [&] { return PerceptionFeasibility(runs); }},
      {4, "figure orderings", FigureOrderings},
      {5, "proposition suite", PropositionSuite},
      {6, "figure-caption geometry", SupportGeometryCheck},
      {7, "Gaussian formula and sphere simulation", GaussianCheck},
      {8, "transport oracle agreement", TransportCheck},
      {9, "nested lattices", LatticeCheck},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.Check(false, fmt::format("exception: {}", e.what()));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !outcome.passed;
    fmt::print("criterion {} {}: {} ({:.1f} s)\n", c.number, outcome.passed ? "PASS" : "FAIL",
               c.title, seconds);
    for (const auto& line : outcome.details) fmt::print("    {}\n", line);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
