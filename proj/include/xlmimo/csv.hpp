// Copyright 2026 The xlmimo Authors
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

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xlmimo {

/// Locale-independent numeric formatting with 9 significant digits; the
/// stable cell format for every emitted CSV.
std::string format_g9(double v);

/// Minimal schema-stable CSV emitter: fixed header, one row per call, empty
/// cells for absent optional values.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::optional<double>>& cells);

 private:
  void* file_;
  std::size_t columns_;
};

/// A named curve for the quick-look SVG charts.
struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained polyline chart; no external tooling involved.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<ChartSeries>& series);

}  // namespace xlmimo
