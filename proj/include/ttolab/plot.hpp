/* Copyright 2026 The ttolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef TTOLAB_PLOT_HPP
#define TTOLAB_PLOT_HPP

// Hand-written SVG figures for scan reports on a fixed 800x800 canvas. Each
// figure is written together with the CSV of the plotted values.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>

#include "ttolab/error.hpp"
#include "ttolab/format.hpp"
#include "ttolab/harness.hpp"
#include "ttolab/io.hpp"

namespace ttolab {

enum class PlotKind { EigScatter, SvDecay };

inline std::string_view to_string(PlotKind k) { return k == PlotKind::EigScatter ? "eig-scatter" : "sv-decay"; }

inline PlotKind parse_plot_kind(std::string_view text) {
  if (text == "eig-scatter") return PlotKind::EigScatter;
  if (text == "sv-decay") return PlotKind::SvDecay;
  throw Error(ErrorCode::ParseError, "plot kind must be eig-scatter or sv-decay, got '" + std::string(text) + "'");
}

struct PlotFiles {
  std::filesystem::path svg;
  std::filesystem::path csv;
};

namespace detail {

inline constexpr double kCanvas = 800.0;
inline constexpr double kMargin = 70.0;

inline std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

/// Row colour on a blue-to-red ramp by sweep position.
inline std::string ramp(std::size_t k, std::size_t count) {
  const double t = count <= 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(40 + 200 * t), 60, static_cast<int>(220 - 180 * t));
  return buf;
}

inline std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline void svg_open(std::ostringstream& svg, std::string_view title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"35\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"20\">" << xml_escape(title)
      << "</text>\n";
}

inline void svg_legend(std::ostringstream& svg, const ScanReport& report, const std::vector<std::size_t>& rows) {
  double y = 70.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    svg << "<rect x=\"690\" y=\"" << fixed(y - 10) << "\" width=\"12\" height=\"12\" fill=\"" << ramp(k, rows.size())
        << "\"/>\n"
        << "<text x=\"708\" y=\"" << fixed(y) << "\" font-family=\"sans-serif\" font-size=\"13\">n = "
        << report.rows[rows[k]].degree << "</text>\n";
    y += 18.0;
  }
}

inline std::pair<std::string, std::string> eig_scatter(const ScanReport& report) {
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    if (!report.rows[k].eigenvalues.empty()) rows.push_back(k);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyReport, "report has no eigenvalue rows");

  std::ostringstream csv;
  csv << "degree,re,im\n";
  // the closed unit disk fills the plot area
  const double centre = kCanvas / 2.0;
  const double radius = (kCanvas - 2.0 * kMargin) / 2.0;
  auto px = [&](Complex z) { return std::make_pair(centre + radius * z.real(), centre - radius * z.imag()); };

  std::ostringstream svg;
  svg_open(svg, "eigenvalues, " + report.scenario);
  svg << "<line x1=\"" << fixed(kMargin) << "\" y1=\"400\" x2=\"" << fixed(kCanvas - kMargin)
      << "\" y2=\"400\" stroke=\"#bbbbbb\"/>\n"
      << "<line x1=\"400\" y1=\"" << fixed(kMargin) << "\" x2=\"400\" y2=\"" << fixed(kCanvas - kMargin)
      << "\" stroke=\"#bbbbbb\"/>\n"
      << "<circle cx=\"400\" cy=\"400\" r=\"" << fixed(radius) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ScanRow& row = report.rows[rows[k]];
    for (const auto& z : row.eigenvalues) {
      csv << row.degree << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      const auto [x, y] = px(z);
      svg << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\"" << ramp(k, rows.size())
          << "\" fill-opacity=\"0.8\"/>\n";
    }
  }
  if (report.accumulation) {
    const auto [x, y] = px(*report.accumulation);
    svg << "<path d=\"M " << fixed(x - 8) << ' ' << fixed(y - 8) << " L " << fixed(x + 8) << ' ' << fixed(y + 8)
        << " M " << fixed(x - 8) << ' ' << fixed(y + 8) << " L " << fixed(x + 8) << ' ' << fixed(y - 8)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fixed(x + 10) << "\" y=\"" << fixed(y - 10)
        << "\" font-family=\"sans-serif\" font-size=\"14\">xi</text>\n";
  }
  svg_legend(svg, report, rows);
  svg << "</svg>\n";
  return {svg.str(), csv.str()};
}

inline std::pair<std::string, std::string> sv_decay(const ScanReport& report) {
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    if (!report.rows[k].singular_values.empty()) rows.push_back(k);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyReport, "report has no singular-value rows");

  constexpr double kFloor = 1e-17;
  std::size_t max_index = 1;
  double lo = 0.0;
  double hi = -17.0;
  for (std::size_t r : rows) {
    const auto& sv = report.rows[r].singular_values;
    max_index = std::max(max_index, sv.size());
    for (double s : sv) {
      if (!std::isfinite(s)) continue;
      const double l = std::log10(std::max(s, kFloor));
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1.0;

  const double left = kMargin;
  const double right = kCanvas - kMargin - 120.0;
  const double top = kMargin;
  const double bottom = kCanvas - kMargin;
  auto px = [&](std::size_t index, double logv) {
    const double x = max_index <= 1 ? left
                                    : left + (right - left) * static_cast<double>(index - 1) /
                                                 static_cast<double>(max_index - 1);
    const double y = bottom - (bottom - top) * (logv - lo) / (hi - lo);
    return std::make_pair(x, y);
  };

  std::ostringstream csv;
  csv << "degree,index,sigma\n";
  std::ostringstream svg;
  svg_open(svg, "log10 singular values, " + report.scenario);
  svg << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(right - left)
      << "\" height=\"" << fixed(bottom - top) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int step = std::max(1, static_cast<int>((hi - lo) / 8.0));
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += step) {
    const double y = px(1, e).second;
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(right) << "\" y2=\""
        << fixed(y) << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << e << "</text>\n";
  }
  svg << "<text x=\"" << fixed((left + right) / 2) << "\" y=\"" << fixed(bottom + 40)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">index</text>\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ScanRow& row = report.rows[rows[k]];
    std::ostringstream path;
    bool first = true;
    for (std::size_t i = 0; i < row.singular_values.size(); ++i) {
      const double s = row.singular_values[i];
      csv << row.degree << ',' << (i + 1) << ',' << format_double(s) << '\n';
      if (!std::isfinite(s)) continue;
      const auto [x, y] = px(i + 1, std::log10(std::max(s, kFloor)));
      path << (first ? "M " : " L ") << fixed(x) << ' ' << fixed(y);
      first = false;
    }
    if (!first) {
      svg << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << ramp(k, rows.size())
          << "\" stroke-width=\"1.5\"/>\n";
    }
  }
  svg_legend(svg, report, rows);
  svg << "</svg>\n";
  return {svg.str(), csv.str()};
}

}  // namespace detail

/// Writes <stem>.svg and <stem>.csv atomically. EmptyReport when the report
/// has nothing of the requested kind.
inline PlotFiles emit_plot(const ScanReport& report, PlotKind kind, const std::filesystem::path& stem) {
  const auto [svg, csv] = kind == PlotKind::EigScatter ? detail::eig_scatter(report) : detail::sv_decay(report);
  PlotFiles files{stem, stem};
  files.svg += ".svg";
  files.csv += ".csv";
  write_atomic(files.svg, svg);
  write_atomic(files.csv, csv);
  return files;
}

}  // namespace ttolab

#endif  // TTOLAB_PLOT_HPP
