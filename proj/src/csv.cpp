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

#include "xlmimo/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace xlmimo {

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  // Guard against locale-dependent decimal separators.
  for (char& c : buf) {
    if (c == ',') c = '.';
  }
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : columns_(columns.size()) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
  file_ = f;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    std::fputs(columns[i].c_str(), f);
    std::fputc(i + 1 < columns.size() ? ',' : '\n', f);
  }
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void CsvWriter::row(const std::vector<std::optional<double>>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: wrong cell count");
  std::FILE* f = static_cast<std::FILE*>(file_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i]) std::fputs(format_g9(*cells[i]).c_str(), f);
    std::fputc(i + 1 < cells.size() ? ',' : '\n', f);
  }
}

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<ChartSeries>& series) {
  constexpr int kW = 720, kH = 480, kMargin = 56;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const ChartSeries& s : series) {
    for (double v : s.x) {
      if (std::isfinite(v)) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      if (std::isfinite(v)) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const auto px = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kW - 2 * kMargin);
  };
  const auto py = [&](double y) {
    return kH - kMargin - (y - ymin) / (ymax - ymin) * (kH - 2 * kMargin);
  };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n"
      << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << kW - 2 * kMargin
      << "' height='" << kH - 2 * kMargin << "' fill='none' stroke='black'/>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const ChartSeries& s = series[i];
    svg << "<polyline fill='none' stroke='" << kColors[i % 8] << "' stroke-width='1.5' points='";
    for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      svg << px(s.x[j]) << ',' << py(s.y[j]) << ' ';
    }
    svg << "'/>\n<text x='" << kW - kMargin + 4 << "' y='" << kMargin + 16 * (i + 1)
        << "' font-size='11' fill='" << kColors[i % 8] << "'>" << s.label << "</text>\n";
  }
  svg << "<text x='" << kMargin << "' y='" << kH - kMargin + 28 << "' font-size='11'>"
      << format_g9(xmin) << "</text>\n"
      << "<text x='" << kW - kMargin << "' y='" << kH - kMargin + 28
      << "' text-anchor='end' font-size='11'>" << format_g9(xmax) << "</text>\n"
      << "<text x='" << kMargin - 4 << "' y='" << kH - kMargin
      << "' text-anchor='end' font-size='11'>" << format_g9(ymin) << "</text>\n"
      << "<text x='" << kMargin - 4 << "' y='" << kMargin + 4
      << "' text-anchor='end' font-size='11'>" << format_g9(ymax) << "</text>\n</svg>\n";

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_svg_chart: cannot open " + path);
  const std::string body = svg.str();
  std::fwrite(body.data(), 1, body.size(), f);
  std::fclose(f);
}

}  // namespace xlmimo
