#pragma once

#include "sharpal/outer.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace sharpal {

inline constexpr const char* kTraceVersion = "sharpal-trace-1";

enum class OutputFormat { table, csv, json };

OutputFormat parse_output_format(const std::string& name);
const char* to_string(OutputFormat format);

/// Column titles shared by the table and CSV writers.
const std::vector<std::string>& report_columns();

/// Vectors print as "[a b c]".
std::string format_vector(const Vector& v, int significant_digits);
std::string format_number(double v, int significant_digits);

/// Quotes a CSV cell when it holds a comma, a quote or a newline.
std::string csv_cell(const std::string& cell);

void write_table(std::ostream& out, const std::vector<SolveReport>& reports);
void write_csv(std::ostream& out, const std::vector<SolveReport>& reports);

nlohmann::json report_to_json(const SolveReport& report);
nlohmann::json trace_to_json(const OuterTrace& trace);

/// {"version": ..., "runs": [...]} with one object per report.
nlohmann::json reports_to_json(const std::vector<SolveReport>& reports);

void write_reports(std::ostream& out, const std::vector<SolveReport>& reports,
                   OutputFormat format);

}  // namespace sharpal
