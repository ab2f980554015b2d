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

#include "network_simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "rdp/common.h"

namespace rdp::internal {

TransportSimplex::TransportSimplex(std::span<const double> supply,
                                   std::span<const double> demand,
                                   CostFn cost)
    : m_(static_cast<int>(supply.size())),
      n_(static_cast<int>(demand.size())),
      root_(m_ + n_),
      cost_(std::move(cost)) {
  const int nodes = m_ + n_;
  real_arcs_ = static_cast<std::int64_t>(m_) * n_;
  supply_.reserve(nodes);
  supply_.insert(supply_.end(), supply.begin(), supply.end());
  for (double d : demand) supply_.push_back(-d);

  double max_cost = 0.0;
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) max_cost = std::max(max_cost, cost_(i, j));
  }
  artificial_cost_ = (max_cost + 1.0) * (nodes + 1);
  tolerance_ = 1e-14 * artificial_cost_;
  block_size_ = std::max<std::int64_t>(
      10, static_cast<std::int64_t>(std::sqrt(static_cast<double>(real_arcs_))));

  parent_.assign(nodes + 1, -1);
  pred_slot_.assign(nodes + 1, -1);
  pred_up_.assign(nodes + 1, 0);
  depth_.assign(nodes + 1, 0);
  potential_.assign(nodes + 1, 0.0);
  adjacent_slots_.assign(nodes + 1, {});
  slot_arc_.resize(nodes);
  slot_flow_.resize(nodes);
  adjacent_slots_[root_].reserve(nodes);
  for (int u = 0; u < nodes; ++u) {
    parent_[u] = root_;
    pred_slot_[u] = u;
    depth_[u] = 1;
    slot_arc_[u] = real_arcs_ + u;
    slot_flow_[u] = std::abs(supply_[u]);
    pred_up_[u] = supply_[u] >= 0.0;
    potential_[u] = pred_up_[u] ? 0.0 : artificial_cost_;
    adjacent_slots_[u].push_back(u);
    adjacent_slots_[root_].push_back(u);
  }
}

int TransportSimplex::ArcSource(std::int64_t arc) const {
  if (arc < real_arcs_) return static_cast<int>(arc / n_);
  const int u = static_cast<int>(arc - real_arcs_);
  return supply_[u] >= 0.0 ? u : root_;
}

int TransportSimplex::ArcTarget(std::int64_t arc) const {
  if (arc < real_arcs_) return m_ + static_cast<int>(arc % n_);
  const int u = static_cast<int>(arc - real_arcs_);
  return supply_[u] >= 0.0 ? root_ : u;
}

double TransportSimplex::ArcCost(std::int64_t arc) const {
  if (arc < real_arcs_) {
    return cost_(static_cast<int>(arc / n_), static_cast<int>(arc % n_));
  }
  const int u = static_cast<int>(arc - real_arcs_);
  return supply_[u] >= 0.0 ? 0.0 : artificial_cost_;
}

// Block search: scan arcs cyclically, stop at the end of the first block
// that contains an improving arc and take the most negative one in it.
bool TransportSimplex::FindEnteringArc() {
  double best = -tolerance_;
  std::int64_t best_arc = -1;
  std::int64_t e = next_arc_;
  int i = static_cast<int>(e / n_);
  int j = static_cast<int>(e % n_);
  std::int64_t in_block = 0;
  for (std::int64_t scanned = 0; scanned < real_arcs_; ++scanned) {
    const double reduced = cost_(i, j) + potential_[i] - potential_[m_ + j];
    if (reduced < best) {
      best = reduced;
      best_arc = e;
    }
    ++e;
    if (++j == n_) {
      j = 0;
      if (++i == m_) {
        i = 0;
        e = 0;
      }
    }
    if (++in_block == block_size_) {
      if (best_arc >= 0) break;
      in_block = 0;
    }
  }
  if (best_arc < 0) return false;
  entering_ = best_arc;
  next_arc_ = e;
  return true;
}

void TransportSimplex::RemoveSlot(int node, int slot) {
  auto& slots = adjacent_slots_[node];
  auto it = std::find(slots.begin(), slots.end(), slot);
  *it = slots.back();
  slots.pop_back();
}

void TransportSimplex::Rehang(int node, int new_parent, int slot) {
  auto attach = [&](int child, int parent, int s) {
    const std::int64_t arc = slot_arc_[s];
    parent_[child] = parent;
    pred_slot_[child] = s;
    depth_[child] = depth_[parent] + 1;
    const bool up = ArcSource(arc) == child;
    pred_up_[child] = up;
    // Tree arcs have zero reduced cost: c + pi(source) - pi(target) = 0.
    potential_[child] = up ? potential_[parent] - ArcCost(arc)
                           : potential_[parent] + ArcCost(arc);
  };
  attach(node, new_parent, slot);
  stack_.clear();
  stack_.push_back(node);
  while (!stack_.empty()) {
    const int w = stack_.back();
    stack_.pop_back();
    for (int s : adjacent_slots_[w]) {
      if (s == pred_slot_[w]) continue;
      const std::int64_t arc = slot_arc_[s];
      const int a = ArcSource(arc);
      const int child = a == w ? ArcTarget(arc) : a;
      attach(child, w, s);
      stack_.push_back(child);
    }
  }
}

void TransportSimplex::Pivot() {
  // Flow is pushed along the entering arc and back around the tree path.
  const int first = ArcSource(entering_);
  const int second = ArcTarget(entering_);
  int a = first;
  int b = second;
  while (a != b) {
    if (depth_[a] > depth_[b]) {
      a = parent_[a];
    } else if (depth_[b] > depth_[a]) {
      b = parent_[b];
    } else {
      a = parent_[a];
      b = parent_[b];
    }
  }
  const int join = a;

  // Strongly feasible leaving-arc rule: among blocking arcs take the last
  // one met when walking the cycle from the join node in flow direction.
  double delta = std::numeric_limits<double>::infinity();
  int u_out = -1;
  int side = 0;
  for (int u = first; u != join; u = parent_[u]) {
    if (!pred_up_[u]) continue;
    const double d = slot_flow_[pred_slot_[u]];
    if (d < delta) {
      delta = d;
      u_out = u;
      side = 1;
    }
  }
  for (int u = second; u != join; u = parent_[u]) {
    if (pred_up_[u]) continue;
    const double d = slot_flow_[pred_slot_[u]];
    if (d <= delta) {
      delta = d;
      u_out = u;
      side = 2;
    }
  }
  if (side == 0) throw SolverError("transport simplex: unbounded cycle");

  if (delta > 0.0) {
    for (int u = first; u != join; u = parent_[u]) {
      slot_flow_[pred_slot_[u]] -= pred_up_[u] ? delta : -delta;
    }
    for (int u = second; u != join; u = parent_[u]) {
      slot_flow_[pred_slot_[u]] += pred_up_[u] ? delta : -delta;
    }
  }

  const int u_in = side == 1 ? first : second;
  const int v_in = side == 1 ? second : first;
  const int slot = pred_slot_[u_out];
  RemoveSlot(u_out, slot);
  RemoveSlot(parent_[u_out], slot);
  slot_arc_[slot] = entering_;
  slot_flow_[slot] = delta;
  adjacent_slots_[u_in].push_back(slot);
  adjacent_slots_[v_in].push_back(slot);
  Rehang(u_in, v_in, slot);
}

TransportSimplex::Solution TransportSimplex::Solve() {
  const std::int64_t nodes = m_ + n_ + 1;
  const std::int64_t max_pivots = 10'000'000 + 200 * nodes * nodes;
  Solution solution;
  while (FindEnteringArc()) {
    Pivot();
    if (++solution.pivots > max_pivots) {
      throw SolverError(fmt::format(
          "transport simplex: no optimality certificate after {} pivots "
          "({} x {} problem, pricing tolerance {:g})",
          solution.pivots, m_, n_, tolerance_));
    }
  }
  double total = 0.0;
  for (double s : supply_) total += std::abs(s);
  for (std::size_t s = 0; s < slot_arc_.size(); ++s) {
    const std::int64_t arc = slot_arc_[s];
    const double flow = slot_flow_[s];
    if (arc >= real_arcs_) {
      if (flow > 1e-9 * std::max(1.0, total)) {
        throw SolverError(fmt::format(
            "transport simplex: artificial arc of node {} carries {:g} at "
            "optimality; marginals are inconsistent",
            arc - real_arcs_, flow));
      }
      continue;
    }
    if (flow <= 0.0) continue;
    const int i = static_cast<int>(arc / n_);
    const int j = static_cast<int>(arc % n_);
    solution.flows.push_back({i, j, flow});
    solution.cost += flow * cost_(i, j);
  }
  std::sort(solution.flows.begin(), solution.flows.end(),
            [](const Flow& x, const Flow& y) {
              return x.source != y.source ? x.source < y.source
                                          : x.sink < y.sink;
            });
  return solution;
}

}  // namespace rdp::internal
