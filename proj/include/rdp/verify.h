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

#ifndef RDP_VERIFY_H_
#define RDP_VERIFY_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rdp {

enum class CheckKind {
  kEqual,    // |measured - target| <= tolerance
  kAtMost,   // measured <= target + tolerance
  kAtLeast,  // measured >= target - tolerance
};

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::kEqual;
  double target = 0.0;
  double tolerance = 0.0;
  double measured = 0.0;
  bool passed = false;
  std::string detail;
};

struct Prop1Row {
  int source = 0;
  int dim = 1;
  int atoms = 0;
  int m = 0;
  double mse = 0.0;
  double w2sq = 0.0;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::vector<Prop1Row> prop1_table;
  bool passed() const;
  // Names of failing checks.
  std::vector<std::string> failures() const;
};

// Default tolerance of every check, by name.
std::map<std::string, double> DefaultTolerances();

// Runs the check suite. Tolerance overrides must name known checks
// (ValidationError otherwise).
VerifyReport RunVerify(std::uint64_t seed,
                       const std::map<std::string, double>& tolerance_overrides);

std::string ReportJson(const VerifyReport& report);

}  // namespace rdp

#endif  // RDP_VERIFY_H_
