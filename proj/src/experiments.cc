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

#include "rdp/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace rdp {
namespace {

constexpr std::int64_t kMaxGridPoints = 100000;

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitList(std::string_view text, char sep = ',') {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    items.push_back(Trim(text.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (items.size() == 1 && items.front().empty()) items.clear();
  for (auto item : items) {
    if (item.empty()) throw ValidationError(fmt::format("empty item in list '{}'", text));
  }
  return items;
}

double ParseDouble(std::string_view text) {
  if (text == "inf") return INFINITY;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || std::isnan(value)) {
    throw ValidationError(fmt::format("expected a number, got '{}'", text));
  }
  return value;
}

template <class T>
T ParseInteger(std::string_view text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError(fmt::format("expected an integer, got '{}'", text));
  }
  return value;
}

std::optional<double> CommonRateOf(const AngularCode& code) {
  return code.common_rate_bits();
}

double SeedCountValue(SeedCount n) {
  return n.continuous() ? INFINITY : static_cast<double>(n.count());
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string SchemeLabel(int m, SeedCount n) {
  return fmt::format("M={}, N={}", m, n.ToString());
}

CurveRecord CircleRecord(const std::string& experiment, const AngularCode& code,
                         PerceptionConstraint p, const ExperimentConfig& config) {
  CurveRecord r;
  r.experiment = experiment;
  r.m = code.m();
  r.n = SeedCountValue(code.n());
  r.rate = code.rate_bits();
  r.common_rate = CommonRateOf(code).value_or(INFINITY);
  r.p = PerceptionValue(p);
  r.d_analytic = AnalyticTradeoff(code.m(), code.n(), p);
  r.seed = config.seed;
  if (config.samples > 0) {
    MonteCarloOptions options;
    options.samples = config.samples;
    options.seed = config.seed;
    options.perception_samples = config.perception_samples;
    const TradeoffPoint point = MonteCarloSchemeEval(code, p, options);
    r.d_empirical = point.distortion;
    r.p_empirical = point.perception;
    r.n_samples = point.n_samples;
  }
  return r;
}

// Analytic line plus empirical markers for each scheme.
void AddCircleSeries(SvgPlot& plot, const std::vector<CurveRecord>& records, int m,
                     SeedCount n) {
  SvgSeries line{SchemeLabel(m, n), {}, {}, {}, SeriesStyle::kLine};
  SvgSeries dots{SchemeLabel(m, n) + " (MC)", {}, {}, {}, SeriesStyle::kMarkers};
  for (const auto& r : records) {
    if (r.m != m || r.n != SeedCountValue(n) || !r.p || !std::isfinite(*r.p)) continue;
    line.x.push_back(*r.p);
    line.y.push_back(*r.d_analytic);
    if (r.d_empirical) {
      dots.x.push_back(*r.p);
      dots.y.push_back(*r.d_empirical);
    }
  }
  plot.series.push_back(std::move(line));
  if (!dots.x.empty()) plot.series.push_back(std::move(dots));
}

}  // namespace

double PerceptionValue(PerceptionConstraint p) {
  return p.constrained() ? p.level() : INFINITY;
}

std::vector<PerceptionConstraint> ParsePGrid(std::string_view text) {
  std::vector<PerceptionConstraint> grid;
  for (auto item : SplitList(text)) {
    if (item == "inf") {
      grid.push_back(PerceptionConstraint::Unconstrained());
      continue;
    }
    const auto parts = SplitList(item, ':');
    if (parts.size() == 1) {
      grid.push_back(PerceptionConstraint::AtMost(ParseDouble(parts[0])));
      continue;
    }
    if (parts.size() != 3) {
      throw ValidationError(fmt::format("range '{}' must be a:b:step", item));
    }
    const double a = ParseDouble(parts[0]);
    const double b = ParseDouble(parts[1]);
    const double step = ParseDouble(parts[2]);
    if (!(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b >= a && step > 0.0 &&
          std::isfinite(step))) {
      throw ValidationError(fmt::format(
          "range '{}' needs 0 <= a <= b and a finite step > 0", item));
    }
    const double span = (b - a) / step;
    if (span > static_cast<double>(kMaxGridPoints)) {
      throw ValidationError(fmt::format("range '{}' has too many points", item));
    }
    const auto count = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
    for (std::int64_t i = 0; i < count; ++i) {
      grid.push_back(PerceptionConstraint::AtMost(std::min(b, a + static_cast<double>(i) * step)));
    }
  }
  if (grid.empty()) throw ValidationError("perception grid is empty");
  return grid;
}

std::vector<int> ParseIntList(std::string_view text) {
  std::vector<int> out;
  for (auto item : SplitList(text)) out.push_back(ParseInteger<int>(item));
  return out;
}

std::vector<SeedCount> ParseSeedCountList(std::string_view text) {
  std::vector<SeedCount> out;
  for (auto item : SplitList(text)) out.push_back(SeedCount::Parse(item));
  return out;
}

std::vector<double> ParseDoubleList(std::string_view text) {
  std::vector<double> out;
  for (auto item : SplitList(text)) out.push_back(ParseDouble(item));
  return out;
}

std::vector<std::optional<double>> ParseCommonRateList(std::string_view text) {
  std::vector<std::optional<double>> out;
  for (auto item : SplitList(text)) {
    const double v = ParseDouble(item);
    out.push_back(std::isinf(v) && v > 0 ? std::nullopt : std::optional<double>(v));
  }
  return out;
}

ExperimentConfig DefaultConfig(std::string_view experiment) {
  ExperimentConfig c;
  c.experiment = std::string(experiment);
  if (experiment == "circle-curves") {
    c.m = {2};
    c.n = {SeedCount::Finite(1), SeedCount::Finite(2), SeedCount::ContinuousDither()};
    c.p_grid = ParsePGrid("0:0.3:0.0125");
  } else if (experiment == "info-vs-common") {
    c.p_grid = ParsePGrid("0:0.3:0.0125");
  } else if (experiment == "supports") {
    c.p_grid = ParsePGrid("0.04");
  } else if (experiment == "gaussian") {
    c.rate = {0.5, 1.0};
    c.common_rate = {0.0, 0.25, 1.0, std::nullopt};
    c.p_grid = ParsePGrid("0:1:0.05,inf");
    c.sphere_n = {16, 24};
  } else if (experiment == "lattice-sweep") {
    c.m = {4};
    c.n = {SeedCount::Finite(1), SeedCount::Finite(2), SeedCount::Finite(4),
           SeedCount::Finite(8)};
    c.p_grid = ParsePGrid("0:0.09:0.005,inf");
    c.samples = 200000;
  } else if (experiment == "verify") {
    c.samples = 0;
  } else {
    throw ValidationError(fmt::format("unknown experiment '{}'", experiment));
  }
  return c;
}

void ApplySetting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (key == "seed") {
    c.seed = ParseInteger<std::uint64_t>(value);
  } else if (key == "out") {
    Require(!value.empty(), "out must not be empty");
    c.out = std::filesystem::path(std::string(value));
  } else if (key == "samples") {
    c.samples = ParseInteger<std::int64_t>(value);
  } else if (key == "perception_samples") {
    c.perception_samples = ParseInteger<std::int64_t>(value);
  } else if (key == "p_grid") {
    c.p_grid = ParsePGrid(value);
  } else if (key == "m") {
    c.m = ParseIntList(value);
  } else if (key == "n") {
    c.n = ParseSeedCountList(value);
  } else if (key == "rate") {
    c.rate = ParseDoubleList(value);
  } else if (key == "common_rate") {
    c.common_rate = ParseCommonRateList(value);
  } else if (key == "sphere_n") {
    c.sphere_n = ParseIntList(value);
  } else if (key == "sphere_rate") {
    c.sphere_rate = ParseDouble(value);
  } else if (key == "sphere_common_rate") {
    c.sphere_common_rate = ParseDouble(value);
  } else if (key == "sphere_sources") {
    c.sphere_sources = ParseInteger<std::int64_t>(value);
  } else if (key == "lattice_shaping") {
    c.lattice_shaping = ParseDouble(value);
  } else if (key == "lattice_source") {
    if (value == "uniform") {
      c.lattice_source = LatticeSource::kUniform;
    } else if (value == "gaussian") {
      c.lattice_source = LatticeSource::kGaussian;
    } else {
      throw ValidationError(fmt::format("lattice_source must be uniform or gaussian, got '{}'", value));
    }
  } else if (key.starts_with("tolerance.")) {
    const std::string name(key.substr(10));
    Require(!name.empty(), "tolerance key needs a check name");
    c.tolerances[name] = ParseDouble(value);
  } else {
    throw ValidationError(fmt::format("unknown config key '{}'", key));
  }
}

void LoadConfigFile(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read config file '{}'", path.string()));
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(fmt::format("{}:{}: expected key = value", path.string(), number));
    }
    try {
      ApplySetting(config, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
}

void ValidateConfig(const ExperimentConfig& c) {
  const std::string& e = c.experiment;
  Require(c.samples >= 0, "samples must be >= 0");
  Require(c.perception_samples >= 0, "perception_samples must be >= 0");
  for (int m : c.m) Require(m >= 1, fmt::format("M must be >= 1, got {}", m));
  if (e == "circle-curves") {
    Require(c.m.size() == 1, "circle-curves takes exactly one M");
    Require(!c.n.empty(), "circle-curves needs at least one N");
    Require(!c.p_grid.empty(), "perception grid is empty");
  } else if (e == "info-vs-common" || e == "supports") {
    Require(!c.p_grid.empty(), "perception grid is empty");
  } else if (e == "gaussian") {
    Require(!c.p_grid.empty(), "perception grid is empty");
    Require(!c.rate.empty() && !c.common_rate.empty(), "gaussian needs rates and common rates");
    for (double r : c.rate) {
      Require(r >= 0.0 && std::isfinite(r), fmt::format("rate must be finite and >= 0, got {}", r));
    }
    for (const auto& cr : c.common_rate) {
      Require(!cr || *cr >= 0.0, "common rate must be >= 0");
    }
    for (int n : c.sphere_n) Require(n >= 1, "sphere_n entries must be >= 1");
    Require(c.sphere_sources >= 2, "sphere_sources must be >= 2");
  } else if (e == "lattice-sweep") {
    Require(!c.p_grid.empty(), "perception grid is empty");
    Require(c.m.size() == 1, "lattice-sweep takes exactly one M");
    Require(!c.n.empty(), "lattice-sweep needs at least one N");
    for (SeedCount n : c.n) Require(!n.continuous(), "lattice-sweep needs finite N");
    Require(c.lattice_shaping > 0.0 && std::isfinite(c.lattice_shaping),
            "lattice_shaping must be finite and > 0");
    Require(c.samples >= 2, "lattice-sweep needs samples >= 2");
  } else if (e != "verify") {
    throw ValidationError(fmt::format("unknown experiment '{}'", e));
  }
}

CurveOutput RunCircleCurves(const ExperimentConfig& config) {
  ValidateConfig(config);
  CurveOutput out;
  const int m = config.m.front();
  for (SeedCount n : config.n) {
    const AngularCode code(m, n);
    for (const auto& p : config.p_grid) {
      out.records.push_back(CircleRecord("circle-curves", code, p, config));
    }
  }
  out.plot = {fmt::format("Circle source, M={}", m), "perception P (squared W2)",
              "distortion D (MSE)", false, false, {}};
  for (SeedCount n : config.n) AddCircleSeries(out.plot, out.records, m, n);
  return out;
}

InfoVsCommonOutput RunInfoVsCommon(const ExperimentConfig& config) {
  ValidateConfig(config);
  InfoVsCommonOutput out;
  const AngularCode common(2, SeedCount::Finite(2));
  const AngularCode private_rate(4, SeedCount::Finite(1));
  for (const auto& code : {common, private_rate}) {
    for (const auto& p : config.p_grid) {
      out.curves.records.push_back(CircleRecord("info-vs-common", code, p, config));
    }
  }
  for (const auto& p : config.p_grid) {
    const double a = AnalyticTradeoff(4, SeedCount::Finite(1), p);
    const double b = AnalyticTradeoff(2, SeedCount::Finite(2), p);
    if (a > b + 1e-12) out.ordering_violations.push_back(PerceptionValue(p));
  }
  out.curves.plot = {"Private rate vs common randomness (2 bits total)",
                     "perception P (squared W2)", "distortion D (MSE)", false, false, {}};
  AddCircleSeries(out.curves.plot, out.curves.records, 2, SeedCount::Finite(2));
  AddCircleSeries(out.curves.plot, out.curves.records, 4, SeedCount::Finite(1));
  return out;
}

std::vector<SupportRow> RunSupports(const ExperimentConfig& config) {
  ValidateConfig(config);
  std::vector<std::pair<int, SeedCount>> schemes;
  if (config.m.empty() && config.n.empty()) {
    schemes = {{2, SeedCount::Finite(1)},
               {2, SeedCount::Finite(2)},
               {4, SeedCount::Finite(1)},
               {2, SeedCount::ContinuousDither()}};
  } else {
    const std::vector<int> ms = config.m.empty() ? std::vector<int>{2} : config.m;
    const std::vector<SeedCount> ns =
        config.n.empty() ? std::vector<SeedCount>{SeedCount::Finite(1)} : config.n;
    for (int m : ms) {
      for (SeedCount n : ns) schemes.emplace_back(m, n);
    }
  }
  std::vector<SupportRow> rows;
  for (const auto& [m, n] : schemes) {
    const AngularCode code(m, n);
    for (const auto& p : config.p_grid) {
      const SupportGeometry g = Supports(code, p);
      auto add = [&](const char* kind, Vec2 v) {
        rows.push_back({m, n, PerceptionValue(p), kind, v.x, v.y, g.mmse_radius, g.arc_radius,
                        g.arc_half_width, g.alpha});
      };
      for (Vec2 c : g.centroids) add("centroid", c);
      for (Vec2 c : g.arc_centers) add("arc_center", c);
    }
  }
  return rows;
}

std::vector<std::string> SupportHeader() {
  return {"M", "N", "P", "kind", "x", "y", "mmse_radius", "arc_radius", "arc_half_width", "alpha"};
}

std::vector<std::vector<std::string>> SupportTable(const std::vector<SupportRow>& rows) {
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    table.push_back({std::to_string(r.m), r.n.ToString(), FormatNumber(r.p), r.kind,
                     FormatNumber(r.x), FormatNumber(r.y), FormatNumber(r.mmse_radius),
                     FormatNumber(r.arc_radius), FormatNumber(r.arc_half_width),
                     FormatNumber(r.alpha)});
  }
  return table;
}

GaussianOutput RunGaussian(const ExperimentConfig& config) {
  ValidateConfig(config);
  GaussianOutput out;
  out.curves.plot = {"Gaussian source D(R, C, P)", "perception P (squared W2)",
                     "distortion D (MSE)", false, false, {}};
  for (double r : config.rate) {
    for (const auto& cr : config.common_rate) {
      SvgSeries line{fmt::format("R={}, C={}", FormatNumber(r), cr ? FormatNumber(*cr) : "inf"),
                     {}, {}, {}, SeriesStyle::kLine};
      for (const auto& p : config.p_grid) {
        CurveRecord rec;
        rec.experiment = "gaussian";
        rec.rate = r;
        rec.common_rate = cr.value_or(INFINITY);
        rec.p = PerceptionValue(p);
        rec.d_analytic = DRcp({r, cr, p});
        rec.seed = config.seed;
        out.curves.records.push_back(rec);
        if (p.constrained()) {
          line.x.push_back(p.level());
          line.y.push_back(*rec.d_analytic);
        }
      }
      out.curves.plot.series.push_back(std::move(line));
    }
  }
  SvgSeries op{"operational (sim)", {}, {}, {}, SeriesStyle::kMarkers};
  SvgSeries vir{"virtual (sim)", {}, {}, {}, SeriesStyle::kMarkers};
  SvgSeries op_target{"operational target", {}, {}, {}, SeriesStyle::kLine};
  SvgSeries vir_target{"virtual target", {}, {}, {}, SeriesStyle::kLine};
  for (int n : config.sphere_n) {
    SphereRow row;
    row.config = {n, config.sphere_rate, config.sphere_common_rate, config.sphere_sources,
                  config.seed};
    row.result = SphereCodebookSim(row.config);
    row.operational_target = GaussianOperationalMse(config.sphere_rate);
    row.virtual_target = GaussianVirtualMse(config.sphere_rate, config.sphere_common_rate);
    const double x = n;
    op.x.push_back(x);
    op.y.push_back(row.result.operational_mse);
    op.y_error.push_back(2.0 * row.result.operational_std_error);
    vir.x.push_back(x);
    vir.y.push_back(row.result.virtual_mse);
    vir.y_error.push_back(2.0 * row.result.virtual_std_error);
    op_target.x.push_back(x);
    op_target.y.push_back(row.operational_target);
    vir_target.x.push_back(x);
    vir_target.y.push_back(row.virtual_target);
    out.sphere.push_back(row);
  }
  out.sphere_plot = {fmt::format("Spherical codebooks, R={}, C={} (bars: 2 SE)",
                                 FormatNumber(config.sphere_rate),
                                 FormatNumber(config.sphere_common_rate)),
                     "block length n", "MSE per dimension", false, false,
                     {op, vir, op_target, vir_target}};
  return out;
}

std::vector<std::string> SphereHeader() {
  return {"n",           "R",         "C",          "codewords_per_seed", "seeds",
          "operational_mse", "operational_se", "operational_target", "virtual_mse",
          "virtual_se",  "virtual_target", "max_cosine", "ordering_violations",
          "n_samples",   "seed"};
}

std::vector<std::vector<std::string>> SphereTable(const std::vector<SphereRow>& rows) {
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    table.push_back({std::to_string(r.config.n), FormatNumber(r.config.rate),
                     FormatNumber(r.config.common_rate),
                     std::to_string(r.result.codewords_per_seed),
                     std::to_string(r.result.seeds), FormatNumber(r.result.operational_mse),
                     FormatNumber(r.result.operational_std_error),
                     FormatNumber(r.operational_target), FormatNumber(r.result.virtual_mse),
                     FormatNumber(r.result.virtual_std_error), FormatNumber(r.virtual_target),
                     FormatNumber(r.result.max_cosine),
                     std::to_string(r.result.ordering_violations),
                     std::to_string(r.config.n_sources), std::to_string(r.config.seed)});
  }
  return table;
}

CurveOutput RunLatticeSweep(const ExperimentConfig& config) {
  ValidateConfig(config);
  const int m = config.m.front();
  std::vector<NestedLatticeSpec> specs;
  for (SeedCount n : config.n) {
    const double delta = config.lattice_shaping / (static_cast<double>(m) * n.count());
    specs.emplace_back(delta, n.count(), m);
  }
  LatticeRunConfig run;
  run.source = config.lattice_source;
  run.n_samples = config.samples;
  run.seed = config.seed;
  const auto curves = CosetSweep(specs, config.p_grid, run);
  CurveOutput out;
  out.plot = {fmt::format("Nested lattices, M={}, shaping step {}", m,
                          FormatNumber(config.lattice_shaping)),
              "perception P (squared W2)", "distortion D (MSE)", false, false, {}};
  for (const auto& curve : curves) {
    SvgSeries line{fmt::format("N={} reference", curve.spec.n()), {}, {}, {}, SeriesStyle::kLine};
    SvgSeries dots{fmt::format("N={}", curve.spec.n()), {}, {}, {}, SeriesStyle::kMarkers};
    for (const auto& point : curve.points) {
      CurveRecord r;
      r.experiment = "lattice-sweep";
      r.m = m;
      r.n = curve.spec.n();
      r.rate = std::log2(m);
      r.common_rate = std::log2(curve.spec.n());
      r.p = PerceptionValue(point.target);
      r.d_analytic = point.analytic_distortion;
      r.d_empirical = point.distortion;
      r.p_empirical = point.perception;
      r.n_samples = point.n_samples;
      r.seed = point.seed;
      if (point.target.constrained()) {
        dots.x.push_back(*r.p);
        dots.y.push_back(point.distortion);
        if (r.d_analytic) {
          line.x.push_back(*r.p);
          line.y.push_back(*r.d_analytic);
        }
      }
      out.records.push_back(r);
    }
    if (!line.x.empty()) out.plot.series.push_back(std::move(line));
    out.plot.series.push_back(std::move(dots));
  }
  return out;
}

}  // namespace rdp
