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

#ifndef RDP_CSV_H_
#define RDP_CSV_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdp {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row of a curve file. Empty optionals are written as empty fields;
// +inf (unlimited common randomness, unconstrained P, continuous dither) is
// written as "inf".
struct CurveRecord {
  std::string experiment;
  std::optional<int> m;
  std::optional<double> n;
  std::optional<double> rate;
  std::optional<double> common_rate;
  std::optional<double> p;
  std::optional<double> d_analytic;
  std::optional<double> d_empirical;
  std::optional<double> p_empirical;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

inline constexpr const char* kCurveHeader =
    "experiment,M,N,R,C,P,D_analytic,D_empirical,P_empirical,n_samples,seed";

// Shortest decimal that round-trips, "inf" for +inf. Throws ValidationError
// for NaN or -inf.
std::string FormatNumber(double value);
std::optional<double> ParseOptionalNumber(const std::string& field);

void WriteCurveCsv(std::ostream& out, std::span<const CurveRecord> records);
std::vector<CurveRecord> ReadCurveCsv(std::istream& in);

// Writes a header and rows of preformatted fields. Throws IoError when the
// file cannot be written.
void WriteTableFile(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);
void WriteCurveFile(const std::filesystem::path& path,
                    std::span<const CurveRecord> records);
// Writes text to a file, creating parent directories.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace rdp

#endif  // RDP_CSV_H_
