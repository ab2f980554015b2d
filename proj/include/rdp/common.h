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

#ifndef RDP_COMMON_H_
#define RDP_COMMON_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace rdp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Malformed inputs: weights that do not sum to one, mismatched sizes, etc.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs outside the set a routine is defined on (negative perception
// level, seed index out of range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An exact solver failed to reach optimality.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive search was asked to run beyond the sizes it supports.
class RegimeExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  static Vec2 Polar(double radius, double angle) {
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }
  double Norm() const { return std::hypot(x, y); }
  double SquaredNorm() const { return x * x + y * y; }

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double SquaredDistance(Vec2 a, Vec2 b) { return (a - b).SquaredNorm(); }

// Upper bound P on the squared Wasserstein-2 distance between source and
// reconstruction distributions, or no constraint at all.
class PerceptionConstraint {
 public:
  static PerceptionConstraint Unconstrained() { return PerceptionConstraint(); }
  static PerceptionConstraint AtMost(double level) {
    if (!(level >= 0.0) || std::isinf(level)) {
      throw DomainError("perception level must be finite and >= 0, got " +
                        std::to_string(level));
    }
    PerceptionConstraint p;
    p.level_ = level;
    return p;
  }

  bool constrained() const { return level_.has_value(); }
  double level() const {
    if (!level_) throw std::logic_error("perception constraint is unconstrained");
    return *level_;
  }
  std::string ToString() const;

  friend bool operator==(const PerceptionConstraint&,
                         const PerceptionConstraint&) = default;

 private:
  PerceptionConstraint() = default;
  std::optional<double> level_;
};

// Weight on the MMSE estimate in the convex combination
// (1 - alpha) * perfect_sample + alpha * mmse_estimate, given the transport
// cost between the two (squared W2 for an optimal generator).
double InterpolationWeight(double transport_cost, PerceptionConstraint p);

// Minimum distortion of the interpolation decoder:
// mmse + [(sqrt(transport_cost) - sqrt(P))_+]^2.
double InterpolatedDistortion(double mmse, double transport_cost,
                              PerceptionConstraint p);

enum class Provenance { kAnalytic, kMonteCarlo };

// One point of a rate / common-randomness / distortion / perception curve.
// Rates are in bits; an empty common_rate means unlimited common randomness.
struct TradeoffPoint {
  double rate = 0.0;
  std::optional<double> common_rate = 0.0;
  PerceptionConstraint target = PerceptionConstraint::Unconstrained();
  double distortion = 0.0;
  double distortion_std_error = 0.0;
  std::optional<double> perception;
  Provenance provenance = Provenance::kAnalytic;
  std::int64_t n_samples = 0;
  std::int64_t perception_samples = 0;
};

}  // namespace rdp

#endif  // RDP_COMMON_H_
