#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "rvosh/metrics.hpp"

namespace rvosh {

enum class ReportFormat { Structured, Csv };

std::string_view to_string(ReportFormat format);
/// "json" (or "structured") and "csv".
ReportFormat parse_report_format(std::string_view name);

/// Score in [0, 1] as a percentage with one decimal, halves rounded away
/// from zero: 0.5225 -> "52.3".
std::string format_score(double value);

/// "J&F J F" in table order, e.g. "62.2 59.2 65.2".
std::string format_row(const DatasetScore& score);

struct Report {
  std::string dataset;
  DatasetScore total;
  std::vector<ExpressionScore> expressions;
};

/// Throws std::invalid_argument for an empty expression list.
Report make_report(std::string dataset, std::span<const ExpressionScore> expressions);

std::string render_report(const Report& report, ReportFormat format);
void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace rvosh
