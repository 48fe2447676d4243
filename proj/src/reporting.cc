// Copyright 2026 The Curriculum Syllabus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "curriculum/reporting.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "curriculum/config.h"
#include "curriculum/stats.h"

namespace curriculum {
namespace {

namespace fs = std::filesystem;

constexpr double kPlotWidth = 640.0;
constexpr double kPlotHeight = 400.0;
constexpr double kMargin = 50.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                "#d62728", "#9467bd", "#8c564b"};

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void WriteFile(const fs::path& path, const std::string& contents,
               std::vector<fs::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report file: " + path.string());
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing report file: " + path.string());
  written.push_back(path);
}

std::string HashList(const std::set<uint64_t>& hashes) {
  std::string out;
  for (uint64_t h : hashes) {
    if (!out.empty()) out += ',';
    out += HashToHex(h);
  }
  return out;
}

// Finite upper bound for plotting; infinite values are drawn at the top.
double PlotMax(const std::vector<double>& values) {
  double max = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) max = std::max(max, v);
  }
  return max > 0.0 ? max * 1.05 : 1.0;
}

std::string SvgHeader(const std::string& title) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotWidth + 160
      << "\" height=\"" << kPlotHeight << "\" viewBox=\"0 0 " << kPlotWidth + 160 << ' '
      << kPlotHeight << "\">\n"
      << "<title>" << title << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kPlotHeight - kMargin << "\" x2=\""
      << kPlotWidth - 10 << "\" y2=\"" << kPlotHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"10\" x2=\"" << kMargin << "\" y2=\""
      << kPlotHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kMargin << "\" y=\"" << kPlotHeight - 15 << "\" font-size=\"12\">"
      << title << "</text>\n";
  return svg.str();
}

struct CurveGroup {
  std::string syllabus;
  std::vector<CurvePoint> points;
};

std::string CurveSvg(const std::string& title, const std::vector<CurveGroup>& groups) {
  long max_step = 1;
  std::vector<double> values;
  for (const auto& g : groups) {
    for (const auto& p : g.points) {
      max_step = std::max(max_step, p.step);
      values.push_back(p.median);
    }
  }
  const double y_max = PlotMax(values);
  const double width = kPlotWidth - kMargin - 10;
  const double height = kPlotHeight - kMargin - 10;
  auto x = [&](long step) { return kMargin + width * static_cast<double>(step) / max_step; };
  auto y = [&](double v) {
    const double clamped = std::isfinite(v) ? v : y_max;
    return kPlotHeight - kMargin - height * clamped / y_max;
  };

  std::ostringstream svg;
  svg << SvgHeader(title);
  svg << "<text x=\"5\" y=\"20\" font-size=\"11\">max " << Coord(y_max) << "</text>\n";
  for (size_t i = 0; i < groups.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<polyline class=\"series\" data-group=\"" << groups[i].syllabus
        << "\" fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& p : groups[i].points) svg << Coord(x(p.step)) << ',' << Coord(y(p.median)) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << kPlotWidth << "\" y=\"" << 20 + 16 * i << "\" font-size=\"12\" fill=\""
        << color << "\">" << groups[i].syllabus << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

struct BoxGroup {
  std::string syllabus;
  BoxStats stats;
  int diverged = 0;
};

std::string BoxSvg(const std::string& title, const std::vector<BoxGroup>& groups) {
  std::vector<double> values;
  for (const auto& g : groups) values.push_back(g.stats.max);
  const double y_max = PlotMax(values);
  const double height = kPlotHeight - kMargin - 10;
  const double slot = (kPlotWidth - kMargin - 10) / std::max<size_t>(groups.size(), 1);
  auto y = [&](double v) {
    const double clamped = std::isfinite(v) ? v : y_max;
    return kPlotHeight - kMargin - height * clamped / y_max;
  };

  std::ostringstream svg;
  svg << SvgHeader(title);
  svg << "<text x=\"5\" y=\"20\" font-size=\"11\">max " << Coord(y_max) << "</text>\n";
  for (size_t i = 0; i < groups.size(); ++i) {
    const BoxStats& s = groups[i].stats;
    const double cx = kMargin + slot * (i + 0.5);
    const double half = slot * 0.2;
    svg << "<g class=\"series\" data-group=\"" << groups[i].syllabus << "\">\n"
        << "<line x1=\"" << Coord(cx) << "\" y1=\"" << Coord(y(s.min)) << "\" x2=\"" << Coord(cx)
        << "\" y2=\"" << Coord(y(s.max)) << "\" stroke=\"black\"/>\n"
        << "<rect x=\"" << Coord(cx - half) << "\" y=\"" << Coord(y(s.q3)) << "\" width=\""
        << Coord(2 * half) << "\" height=\"" << Coord(y(s.q1) - y(s.q3))
        << "\" fill=\"#4a90d9\" stroke=\"black\"/>\n"
        << "<circle cx=\"" << Coord(cx) << "\" cy=\"" << Coord(y(s.median))
        << "\" r=\"4\" fill=\"#f5c518\"/>\n"
        << "<text x=\"" << Coord(cx - half) << "\" y=\"" << kPlotHeight - kMargin + 15
        << "\" font-size=\"10\">" << groups[i].syllabus;
    if (groups[i].diverged > 0) svg << " (" << groups[i].diverged << " diverged)";
    svg << "</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::vector<CurvePoint> MedianCurve(std::span<const RunRecord> records, Setting setting) {
  if (records.empty()) throw ContractViolation("median curve of no records");
  std::vector<const RunRecord*> used;
  for (const RunRecord& r : records) {
    if (!r.diverged) used.push_back(&r);
  }
  if (used.empty()) {
    for (const RunRecord& r : records) used.push_back(&r);
  }

  const RunRecord* longest = used.front();
  size_t common = longest->rows.size();
  for (const RunRecord* r : used) {
    if (r->rows.size() > longest->rows.size()) longest = r;
    common = std::min(common, r->rows.size());
  }
  for (const RunRecord* r : used) {
    for (size_t i = 0; i < r->rows.size(); ++i) {
      if (r->rows[i].step != longest->rows[i].step) {
        throw StructuralError("validation steps differ between seeds " +
                              std::to_string(r->seed) + " and " +
                              std::to_string(longest->seed));
      }
    }
  }

  std::vector<CurvePoint> curve;
  std::vector<double> values(used.size());
  for (size_t i = 0; i < common; ++i) {
    for (size_t k = 0; k < used.size(); ++k) {
      values[k] = used[k]->bits_error(used[k]->rows[i], setting);
    }
    std::sort(values.begin(), values.end());
    curve.push_back({longest->rows[i].step, SortedMedian(values),
                     SortedQuantile(values, 0.25), SortedQuantile(values, 0.75)});
  }
  return curve;
}

BoxStats ComputeBoxStats(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("box statistics of no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted.front(), SortedQuantile(sorted, 0.25), SortedMedian(sorted),
          SortedQuantile(sorted, 0.75), sorted.back()};
}

std::vector<fs::path> EmitReport(std::span<const RunRecord> records, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create report directory " + out_dir.string());

  // problem -> syllabus -> records, in enum order.
  std::map<Problem, std::map<SyllabusKind, std::vector<RunRecord>>> grouped;
  for (const RunRecord& r : records) grouped[r.problem][r.syllabus].push_back(r);

  std::vector<fs::path> written;
  std::ostringstream manifest;
  manifest << "# curriculum report manifest\n"
           << "quartile_method = linear interpolation between order statistics (type 7)\n"
           << "curve_statistic = median over seeds; diverged runs excluded unless all diverged\n"
           << "box_statistic = min, q1, median, q3, max over seeds; diverged runs included\n";
  std::vector<std::string> artifact_lines;
  std::vector<std::string> diverged_lines;

  for (auto& [problem, by_syllabus] : grouped) {
    const std::string pname(ProblemName(problem));
    const size_t first_written = written.size();
    std::set<uint64_t> hashes;
    for (auto& [kind, runs] : by_syllabus) {
      std::sort(runs.begin(), runs.end(),
                [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });
      for (const RunRecord& r : runs) {
        hashes.insert(r.config_hash);
        if (r.diverged) {
          diverged_lines.push_back("diverged = " + pname + " " +
                                   std::string(SyllabusName(kind)) + " seed " +
                                   std::to_string(r.seed));
        }
      }
    }

    for (Setting setting : {Setting::kTarget, Setting::kMulti}) {
      const std::string stem = "curves_" + pname + "_" + std::string(SettingName(setting));
      std::ostringstream csv;
      csv << "step,syllabus,median,q1,q3\n";
      std::vector<CurveGroup> groups;
      for (const auto& [kind, runs] : by_syllabus) {
        CurveGroup group{std::string(SyllabusName(kind)), MedianCurve(runs, setting)};
        for (const CurvePoint& p : group.points) {
          csv << p.step << ',' << group.syllabus << ',' << FormatDouble(p.median) << ','
              << FormatDouble(p.q1) << ',' << FormatDouble(p.q3) << '\n';
        }
        groups.push_back(std::move(group));
      }
      WriteFile(out_dir / (stem + ".csv"), csv.str(), written);
      WriteFile(out_dir / (stem + ".svg"), CurveSvg(stem, groups), written);
    }

    std::set<std::string> test_names;
    for (const auto& [kind, runs] : by_syllabus) {
      for (const RunRecord& r : runs) {
        for (const TestResult& t : r.tests) test_names.insert(t.test_name);
      }
    }
    for (const std::string& test : test_names) {
      const std::string stem = "generalization_" + pname + "_" + test;
      std::ostringstream csv;
      csv << "syllabus,min,q1,median,q3,max\n";
      std::vector<BoxGroup> groups;
      for (const auto& [kind, runs] : by_syllabus) {
        BoxGroup group;
        group.syllabus = std::string(SyllabusName(kind));
        std::vector<double> errors;
        for (const RunRecord& r : runs) {
          for (const TestResult& t : r.tests) {
            if (t.test_name == test) errors.push_back(t.bits_error);
          }
          if (r.diverged) ++group.diverged;
        }
        if (errors.empty()) continue;
        group.stats = ComputeBoxStats(errors);
        const BoxStats& s = group.stats;
        csv << group.syllabus << ',' << FormatDouble(s.min) << ',' << FormatDouble(s.q1) << ','
            << FormatDouble(s.median) << ',' << FormatDouble(s.q3) << ','
            << FormatDouble(s.max) << '\n';
        groups.push_back(std::move(group));
      }
      WriteFile(out_dir / (stem + ".csv"), csv.str(), written);
      WriteFile(out_dir / (stem + ".svg"), BoxSvg(stem, groups), written);
    }

    const std::string hash_list = HashList(hashes);
    for (size_t i = first_written; i < written.size(); ++i) {
      artifact_lines.push_back("artifact = " + written[i].filename().string() +
                               " config_hash=" + hash_list);
    }
  }

  std::sort(artifact_lines.begin(), artifact_lines.end());
  artifact_lines.erase(std::unique(artifact_lines.begin(), artifact_lines.end()),
                       artifact_lines.end());
  for (const auto& line : artifact_lines) manifest << line << '\n';
  for (const auto& line : diverged_lines) manifest << line << '\n';
  WriteFile(out_dir / "manifest.txt", manifest.str(), written);
  return written;
}

std::vector<RunRecord> LoadRunRecords(const fs::path& dir) {
  std::vector<fs::path> status_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".status") status_files.push_back(entry.path());
  }
  std::sort(status_files.begin(), status_files.end());
  std::vector<RunRecord> records;
  for (const fs::path& status : status_files) {
    fs::path csv = status;
    csv.replace_extension(".csv");
    records.push_back(LoadRunRecord(csv));
  }
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.problem, a.syllabus, a.seed) < std::tie(b.problem, b.syllabus, b.seed);
  });
  return records;
}

}  // namespace curriculum
