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
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "network_simplex.h"
#include "rdp/assignment.h"

namespace rdp {
namespace {

constexpr double kWeightTolerance = 1e-12;

double SquaredDistanceFlat(const double* a, const double* b, int dim) {
  double sum = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

std::vector<std::size_t> SortedOrder(const FiniteDistribution& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.atom(a)[0] < p.atom(b)[0];
  });
  return order;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double ParseDouble(const std::string& text, std::size_t line_number) {
  std::string_view view(text);
  while (!view.empty() && view.front() == ' ') view.remove_prefix(1);
  while (!view.empty() && (view.back() == ' ' || view.back() == '\r')) {
    view.remove_suffix(1);
  }
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec != std::errc() || end != view.data() + view.size() || view.empty()) {
    throw ValidationError(fmt::format(
        "distribution CSV line {}: '{}' is not a number", line_number, text));
  }
  return value;
}

}  // namespace

FiniteDistribution::FiniteDistribution(int dim, std::vector<double> coords,
                                       std::vector<double> weights)
    : dim_(dim) {
  if (dim < 1) throw ValidationError("distribution dimension must be >= 1");
  if (weights.empty()) throw ValidationError("distribution has no atoms");
  if (coords.size() != weights.size() * static_cast<std::size_t>(dim)) {
    throw ValidationError(fmt::format(
        "distribution has {} coordinates for {} atoms of dimension {}",
        coords.size(), weights.size(), dim));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError(fmt::format("invalid atom weight {}", w));
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw ValidationError(
        fmt::format("atom weights sum to {:.17g}, expected 1", total));
  }
  for (double c : coords) {
    if (!std::isfinite(c)) throw ValidationError("non-finite atom coordinate");
  }

  std::map<std::vector<double>, std::size_t> seen;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::vector<double> key(coords.begin() + i * dim,
                            coords.begin() + (i + 1) * dim);
    for (double& c : key) c += 0.0;  // fold -0 into +0
    auto [it, inserted] = seen.emplace(key, weights_.size());
    if (inserted) {
      coords_.insert(coords_.end(), key.begin(), key.end());
      weights_.push_back(weights[i]);
    } else {
      weights_[it->second] += weights[i];
    }
  }
}

FiniteDistribution FiniteDistribution::Uniform(int dim,
                                               std::vector<double> coords) {
  if (dim < 1 || coords.empty() || coords.size() % dim != 0) {
    throw ValidationError("uniform distribution needs whole atoms");
  }
  const std::size_t count = coords.size() / dim;
  return FiniteDistribution(dim, std::move(coords),
                            std::vector<double>(count, 1.0 / count));
}

FiniteDistribution FiniteDistribution::OnLine(std::vector<double> points,
                                              std::vector<double> weights) {
  return FiniteDistribution(1, std::move(points), std::move(weights));
}

FiniteDistribution FiniteDistribution::PointMass(std::vector<double> point) {
  const int dim = static_cast<int>(point.size());
  return FiniteDistribution(dim, std::move(point), {1.0});
}

double FiniteDistribution::SquaredDistance(std::size_t i,
                                           const FiniteDistribution& other,
                                           std::size_t j) const {
  return SquaredDistanceFlat(coords_.data() + i * dim_,
                             other.coords_.data() + j * other.dim_, dim_);
}

bool FiniteDistribution::SameAs(const FiniteDistribution& other,
                                double tol) const {
  if (dim_ != other.dim_) return false;
  auto covered = [tol](const FiniteDistribution& a,
                       const FiniteDistribution& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.weight(i) <= tol) continue;
      bool found = false;
      for (std::size_t j = 0; j < b.size() && !found; ++j) {
        found = a.SquaredDistance(i, b, j) <= tol * tol &&
                std::abs(a.weight(i) - b.weight(j)) <= tol;
      }
      if (!found) return false;
    }
    return true;
  };
  return covered(*this, other) && covered(other, *this);
}

TransportPlan::TransportPlan(FiniteDistribution source,
                             FiniteDistribution target,
                             std::vector<Entry> entries)
    : source_(std::move(source)),
      target_(std::move(target)),
      entries_(std::move(entries)),
      cost_(0.0) {
  for (const Entry& e : entries_) {
    cost_ += e.mass * source_.SquaredDistance(e.source, target_, e.target);
  }
}

std::vector<double> TransportPlan::RowSums() const {
  std::vector<double> sums(source_.size(), 0.0);
  for (const Entry& e : entries_) sums[e.source] += e.mass;
  return sums;
}

std::vector<double> TransportPlan::ColumnSums() const {
  std::vector<double> sums(target_.size(), 0.0);
  for (const Entry& e : entries_) sums[e.target] += e.mass;
  return sums;
}

double TransportPlan::MarginalError() const {
  double worst = 0.0;
  const auto rows = RowSums();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i] - source_.weight(i)));
  }
  const auto cols = ColumnSums();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    worst = std::max(worst, std::abs(cols[j] - target_.weight(j)));
  }
  return worst;
}

std::vector<double> TransportPlan::Dense() const {
  std::vector<double> dense(source_.size() * target_.size(), 0.0);
  for (const Entry& e : entries_) {
    dense[e.source * target_.size() + e.target] += e.mass;
  }
  return dense;
}

TransportResult W2Exact(const FiniteDistribution& p,
                        const FiniteDistribution& q) {
  if (p.dim() != q.dim()) {
    throw ValidationError(fmt::format(
        "cannot couple distributions of dimension {} and {}", p.dim(), q.dim()));
  }
  if (p.size() > kMaxExactSupport || q.size() > kMaxExactSupport) {
    throw ValidationError(fmt::format(
        "exact transport supports limited to {} atoms, got {} x {}",
        kMaxExactSupport, p.size(), q.size()));
  }
  std::vector<TransportPlan::Entry> entries;
  if (p.size() == 1 || q.size() == 1) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double mass = p.size() == 1 ? q.weight(j) : p.weight(i);
        if (mass > 0.0) entries.push_back({i, j, mass});
      }
    }
  } else {
    internal::TransportSimplex simplex(
        p.weights(), q.weights(),
        [&](int i, int j) { return p.SquaredDistance(i, q, j); });
    const auto solution = simplex.Solve();
    entries.reserve(solution.flows.size());
    for (const auto& f : solution.flows) {
      entries.push_back({static_cast<std::size_t>(f.source),
                         static_cast<std::size_t>(f.sink), f.mass});
    }
  }
  TransportPlan plan(p, q, std::move(entries));
  const double cost = plan.cost();
  return {cost, std::move(plan)};
}

double W2Empirical(std::span<const double> samples_a,
                   std::span<const double> samples_b, int dim) {
  if (dim < 1 || samples_a.size() % dim != 0 || samples_b.size() % dim != 0) {
    throw ValidationError("sample arrays must hold whole points");
  }
  if (samples_a.size() != samples_b.size()) {
    throw ValidationError(fmt::format(
        "empirical W2 needs equal sample counts, got {} and {}",
        samples_a.size() / dim, samples_b.size() / dim));
  }
  const int n = static_cast<int>(samples_a.size() / dim);
  if (n == 0) throw ValidationError("empirical W2 of empty samples");
  if (static_cast<std::size_t>(n) > kMaxExactSupport) {
    throw ValidationError(fmt::format(
        "empirical W2 limited to {} samples, got {}", kMaxExactSupport, n));
  }
  // With repeated points, solve the merged empirical measures instead.
  const auto merged_a = FiniteDistribution::Uniform(
      dim, std::vector<double>(samples_a.begin(), samples_a.end()));
  const auto merged_b = FiniteDistribution::Uniform(
      dim, std::vector<double>(samples_b.begin(), samples_b.end()));
  if (merged_a.size() < static_cast<std::size_t>(n) ||
      merged_b.size() < static_cast<std::size_t>(n)) {
    return W2Exact(merged_a, merged_b).cost;
  }
  const double* a = samples_a.data();
  const double* b = samples_b.data();
  const auto assignment = SolveAssignment(n, [&](int i, int j) {
    return SquaredDistanceFlat(a + i * dim, b + j * dim, dim);
  });
  return assignment.cost / n;
}

double W2Empirical(std::span<const Vec2> samples_a,
                   std::span<const Vec2> samples_b) {
  std::vector<double> a, b;
  a.reserve(2 * samples_a.size());
  b.reserve(2 * samples_b.size());
  for (Vec2 v : samples_a) a.insert(a.end(), {v.x, v.y});
  for (Vec2 v : samples_b) b.insert(b.end(), {v.x, v.y});
  return W2Empirical(a, b, 2);
}

TransportResult W2Quantile1D(const FiniteDistribution& p,
                             const FiniteDistribution& q) {
  if (p.dim() != 1 || q.dim() != 1) {
    throw ValidationError("quantile coupling needs one-dimensional atoms");
  }
  const auto order_p = SortedOrder(p);
  const auto order_q = SortedOrder(q);
  auto cumulative = [](const FiniteDistribution& d,
                       const std::vector<std::size_t>& order) {
    std::vector<double> cdf(order.size());
    double running = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      running += d.weight(order[i]);
      cdf[i] = running;
    }
    for (double& c : cdf) c /= running;
    cdf.back() = 1.0;
    return cdf;
  };
  const auto cdf_p = cumulative(p, order_p);
  const auto cdf_q = cumulative(q, order_q);

  std::vector<TransportPlan::Entry> entries;
  double level = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < cdf_p.size() && j < cdf_q.size()) {
    const double next = std::min(cdf_p[i], cdf_q[j]);
    if (next > level) entries.push_back({order_p[i], order_q[j], next - level});
    level = next;
    if (cdf_p[i] == next) ++i;
    if (cdf_q[j] == next) ++j;
  }
  TransportPlan plan(p, q, std::move(entries));
  const double cost = plan.cost();
  return {cost, std::move(plan)};
}

double W2Quantile1D(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError(fmt::format(
        "quantile W2 needs equal nonzero sample counts, got {} and {}",
        a.size(), b.size()));
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double diff = sa[i] - sb[i];
    sum += diff * diff;
  }
  return sum / static_cast<double>(sa.size());
}

double SemidiscreteCircle(const FiniteDistribution& targets) {
  if (targets.dim() != 2) {
    throw UnsupportedConfiguration("circle targets must be points in R^2");
  }
  const std::size_t k = targets.size();
  const double expected_weight = 1.0 / static_cast<double>(k);
  std::vector<double> angles;
  const double radius = std::hypot(targets.atom(0)[0], targets.atom(0)[1]);
  for (std::size_t i = 0; i < k; ++i) {
    const auto a = targets.atom(i);
    if (std::abs(targets.weight(i) - expected_weight) > 1e-12) {
      throw UnsupportedConfiguration("circle targets must be equally weighted");
    }
    if (std::abs(std::hypot(a[0], a[1]) - radius) > 1e-12) {
      throw UnsupportedConfiguration(
          "circle targets must lie on one centered circle");
    }
    angles.push_back(std::atan2(a[1], a[0]));
  }
  if (k > 1) {
    std::sort(angles.begin(), angles.end());
    angles.push_back(angles.front() + kTwoPi);
    const double spacing = kTwoPi / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (std::abs(angles[i + 1] - angles[i] - spacing) > 1e-9) {
        throw UnsupportedConfiguration(
            "circle targets must be equally spaced rotations of one atom");
      }
    }
  }
  // Each nearest-atom cell is an arc of width 2 pi / k centered on its atom,
  // over which E[cos] = sin(pi / k) / (pi / k).
  const double half_width = kPi / static_cast<double>(k);
  const double mean_cos = std::sin(half_width) / half_width;
  return 1.0 + radius * radius - 2.0 * radius * mean_cos;
}

void WriteDistributionCsv(std::ostream& out, const FiniteDistribution& dist) {
  for (int d = 0; d < dist.dim(); ++d) out << 'x' << d << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (double c : dist.atom(i)) out << fmt::format("{},", c);
    out << fmt::format("{}\n", dist.weight(i));
  }
}

FiniteDistribution ReadDistributionCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("distribution CSV is empty");
  }
  const auto header = SplitCsvLine(line);
  if (header.size() < 2) {
    throw ValidationError("distribution CSV header needs x0,...,weight");
  }
  const int dim = static_cast<int>(header.size()) - 1;
  std::vector<double> coords, weights;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw ValidationError(fmt::format(
          "distribution CSV line {} has {} fields, expected {}", line_number,
          fields.size(), header.size()));
    }
    for (int d = 0; d < dim; ++d) {
      coords.push_back(ParseDouble(fields[d], line_number));
    }
    weights.push_back(ParseDouble(fields[dim], line_number));
  }
  return FiniteDistribution(dim, std::move(coords), std::move(weights));
}

void WritePlanCsv(std::ostream& out, const TransportPlan& plan) {
  const int ds = plan.source().dim();
  const int dt = plan.target().dim();
  for (int d = 0; d < ds; ++d) out << 's' << d << ',';
  for (int d = 0; d < dt; ++d) out << 't' << d << ',';
  out << "mass\n";
  for (const auto& e : plan.entries()) {
    for (double c : plan.source().atom(e.source)) out << fmt::format("{},", c);
    for (double c : plan.target().atom(e.target)) out << fmt::format("{},", c);
    out << fmt::format("{}\n", e.mass);
  }
}

}  // namespace rdp
