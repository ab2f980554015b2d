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

#include "rdp/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rdp/common.h"

namespace rdp {
namespace {

constexpr int kCurveColumns = 11;

std::string Field(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : std::string();
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T ParseInteger(const std::string& field, const char* name) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValidationError(fmt::format("bad {} field '{}'", name, field));
  }
  return value;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

void Finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

std::string FormatNumber(double value) {
  if (std::isnan(value) || value == -INFINITY) {
    throw ValidationError(fmt::format("cannot write non-finite value {}", value));
  }
  if (value == INFINITY) return "inf";
  if (value == 0.0) return "0";
  return fmt::format("{}", value);
}

std::optional<double> ParseOptionalNumber(const std::string& field) {
  if (field.empty()) return std::nullopt;
  if (field == "inf") return INFINITY;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ValidationError(fmt::format("bad numeric field '{}'", field));
  }
  return value;
}

void WriteCurveCsv(std::ostream& out, std::span<const CurveRecord> records) {
  out << kCurveHeader << '\n';
  for (const auto& r : records) {
    if (r.experiment.empty() || r.experiment.find(',') != std::string::npos) {
      throw ValidationError(fmt::format("bad experiment name '{}'", r.experiment));
    }
    for (const auto& v : {r.d_analytic, r.d_empirical, r.p_empirical}) {
      if (v && !std::isfinite(*v)) {
        throw ValidationError(fmt::format("non-finite value in {} row", r.experiment));
      }
    }
    out << r.experiment << ',' << (r.m ? std::to_string(*r.m) : std::string()) << ','
        << Field(r.n) << ',' << Field(r.rate) << ',' << Field(r.common_rate) << ','
        << Field(r.p) << ',' << Field(r.d_analytic) << ',' << Field(r.d_empirical) << ','
        << Field(r.p_empirical) << ',' << r.n_samples << ',' << r.seed << '\n';
  }
}

std::vector<CurveRecord> ReadCurveCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) {
    throw ValidationError("missing or unexpected curve header");
  }
  std::vector<CurveRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitFields(line);
    if (static_cast<int>(f.size()) != kCurveColumns) {
      throw ValidationError(fmt::format("expected {} fields, got {} in '{}'", kCurveColumns,
                                        f.size(), line));
    }
    CurveRecord r;
    r.experiment = f[0];
    if (!f[1].empty()) r.m = ParseInteger<int>(f[1], "M");
    r.n = ParseOptionalNumber(f[2]);
    r.rate = ParseOptionalNumber(f[3]);
    r.common_rate = ParseOptionalNumber(f[4]);
    r.p = ParseOptionalNumber(f[5]);
    r.d_analytic = ParseOptionalNumber(f[6]);
    r.d_empirical = ParseOptionalNumber(f[7]);
    r.p_empirical = ParseOptionalNumber(f[8]);
    r.n_samples = ParseInteger<std::int64_t>(f[9], "n_samples");
    r.seed = ParseInteger<std::uint64_t>(f[10], "seed");
    records.push_back(std::move(r));
  }
  return records;
}

void WriteTableFile(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  auto out = OpenForWrite(path);
  auto write_row = [&](const std::vector<std::string>& row) {
    if (row.size() != header.size()) {
      throw ValidationError(fmt::format("row has {} fields, header has {}", row.size(),
                                        header.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  Finish(out, path);
}

void WriteCurveFile(const std::filesystem::path& path, std::span<const CurveRecord> records) {
  std::ostringstream text;
  WriteCurveCsv(text, records);
  WriteTextFile(path, text.str());
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  auto out = OpenForWrite(path);
  out << text;
  Finish(out, path);
}

}  // namespace rdp
