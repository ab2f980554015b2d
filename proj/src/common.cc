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

#include "rdp/common.h"

#include <algorithm>

#include <fmt/format.h>

namespace rdp {

std::string PerceptionConstraint::ToString() const {
  return level_ ? fmt::format("{}", *level_) : std::string("inf");
}

double InterpolationWeight(double transport_cost, PerceptionConstraint p) {
  if (!p.constrained() || transport_cost <= p.level()) return 1.0;
  return std::sqrt(p.level() / transport_cost);
}

double InterpolatedDistortion(double mmse, double transport_cost,
                              PerceptionConstraint p) {
  if (!p.constrained()) return mmse;
  const double gap =
      std::max(0.0, std::sqrt(std::max(0.0, transport_cost)) -
                        std::sqrt(p.level()));
  return mmse + gap * gap;
}

}  // namespace rdp
