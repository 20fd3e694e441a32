#include "rvosh/report.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"
#include "rvosh/error.hpp"

namespace rvosh {

std::string_view to_string(ReportFormat format) {
  return format == ReportFormat::Csv ? "csv" : "json";
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json" || name == "structured") return ReportFormat::Structured;
  if (name == "csv") return ReportFormat::Csv;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

std::string format_score(double value) {
  // Go through a fixed decimal expansion first so 0.5225 (stored just below)
  // still rounds half away from zero.
  const double tenths = std::strtod(fmt::format("{:.6f}", value * 1000.0).c_str(), nullptr);
  const auto rounded = static_cast<long long>(std::round(tenths));
  const char* sign = rounded < 0 ? "-" : "";
  const long long mag = std::llabs(rounded);
  return fmt::format("{}{}.{}", sign, mag / 10, mag % 10);
}

std::string format_row(const DatasetScore& s) {
  return fmt::format("{} {} {}", format_score(s.jf), format_score(s.j), format_score(s.f));
}

Report make_report(std::string dataset, std::span<const ExpressionScore> expressions) {
  Report r;
  r.dataset = std::move(dataset);
  r.total = score_dataset(expressions);
  r.expressions.assign(expressions.begin(), expressions.end());
  return r;
}

std::string render_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "dataset,expressions,J&F,J,F\n";
    const auto quote = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    };
    out += fmt::format("{},{},{},{},{}\n", quote(report.dataset), report.total.expression_count,
                       format_score(report.total.jf), format_score(report.total.j),
                       format_score(report.total.f));
    return out;
  }

  nlohmann::ordered_json doc;
  doc["dataset"] = report.dataset;
  doc["expressions"] = report.total.expression_count;
  doc["J&F"] = format_score(report.total.jf);
  doc["J"] = format_score(report.total.j);
  doc["F"] = format_score(report.total.f);
  auto& rows = doc["per_expression"] = nlohmann::ordered_json::array();
  for (const auto& e : report.expressions) {
    nlohmann::ordered_json row;
    row["video"] = e.video_id;
    row["expression"] = e.expression_id;
    row["J&F"] = format_score(e.jf);
    row["J"] = format_score(e.mean_j);
    row["F"] = format_score(e.mean_f);
    rows.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path.string());
  out << render_report(report, format);
  if (!out) throw IoError("failed writing report " + path.string());
}

}  // namespace rvosh
