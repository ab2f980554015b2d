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

#ifndef RDP_SRC_NETWORK_SIMPLEX_H_
#define RDP_SRC_NETWORK_SIMPLEX_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rdp::internal {

// Primal network simplex for the balanced transportation problem
//
//   min sum_ij c(i, j) f_ij  s.t.  sum_j f_ij = supply_i,
//                                  sum_i f_ij = demand_j,  f >= 0.
//
// The basis starts from artificial arcs to an extra root node (big-M costs),
// which makes the initial spanning tree strongly feasible; the leaving-arc
// rule preserves that property, so degenerate pivots cannot cycle.
class TransportSimplex {
 public:
  using CostFn = std::function<double(int, int)>;

  struct Flow {
    int source;
    int sink;
    double mass;
  };

  struct Solution {
    std::vector<Flow> flows;
    double cost = 0.0;
    std::int64_t pivots = 0;
  };

  TransportSimplex(std::span<const double> supply,
                   std::span<const double> demand, CostFn cost);

  // Throws SolverError when the iteration budget runs out or artificial arcs
  // still carry flow at optimality (inconsistent marginals).
  Solution Solve();

 private:
  int ArcSource(std::int64_t arc) const;
  int ArcTarget(std::int64_t arc) const;
  double ArcCost(std::int64_t arc) const;

  bool FindEnteringArc();
  void Pivot();
  void Rehang(int node, int new_parent, int slot);
  void RemoveSlot(int node, int slot);

  int m_;
  int n_;
  int root_;
  CostFn cost_;
  double artificial_cost_ = 0.0;
  double tolerance_ = 0.0;
  std::vector<double> supply_;

  // Spanning tree: every non-root node records its parent and the tree slot
  // holding the arc to it. Slots own (arc, flow) pairs; there are exactly
  // node_count - 1 of them and an entering arc reuses the leaving arc's slot.
  std::vector<int> parent_;
  std::vector<int> pred_slot_;
  std::vector<char> pred_up_;  // arc points from node to parent
  std::vector<int> depth_;
  std::vector<double> potential_;
  std::vector<std::vector<int>> adjacent_slots_;
  std::vector<std::int64_t> slot_arc_;
  std::vector<double> slot_flow_;

  std::int64_t real_arcs_ = 0;
  std::int64_t block_size_ = 0;
  std::int64_t next_arc_ = 0;
  std::int64_t entering_ = -1;
  std::vector<int> stack_;
};

}  // namespace rdp::internal

#endif  // RDP_SRC_NETWORK_SIMPLEX_H_
