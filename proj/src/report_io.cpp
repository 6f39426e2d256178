#include "sharpal/report_io.hpp"

#include "sharpal/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>

namespace sharpal {

namespace {

constexpr int kTableDigits = 6;
constexpr int kExactDigits = 17;

std::vector<std::string> row_cells(const SolveReport& r, int digits) {
  return {r.problem_id,
          std::to_string(r.outer_iterations),
          format_number(r.kkt_residual, digits),
          std::to_string(r.inner_iterations),
          std::to_string(r.inform),
          format_vector(r.x, digits),
          format_number(r.f, digits),
          format_vector(r.lambda, digits),
          format_number(r.infeasibility, digits),
          r.annotation};
}

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// Display width of a UTF-8 string, counting code points.
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw NotFoundError("unknown format '" + name + "' (expected table|csv|json)");
}

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::table: return "table";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
  }
  return "unknown";
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "Prob.", "It.", "KKT norm", "Int. It.", "Inform", "x", "f(x)", "λ", "Infeas.", "Annotation"};
  return columns;
}

std::string format_number(double v, int digits) { return fmt::format("{:.{}g}", v, digits); }

std::string format_vector(const Vector& v, int digits) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_number(v(i), digits);
  }
  out += ']';
  return out;
}

void write_table(std::ostream& out, const std::vector<SolveReport>& reports) {
  const auto& columns = report_columns();
  std::vector<std::vector<std::string>> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) rows.push_back(row_cells(r, kTableDigits));

  std::vector<std::size_t> widths(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    widths[c] = display_width(columns[c]);
    for (const auto& row : rows) widths[c] = std::max(widths[c], display_width(row[c]));
  }
  const auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) line += "  ";
      line += cells[c];
      if (c + 1 < cells.size()) line.append(widths[c] - display_width(cells[c]), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  emit(columns);
  for (const auto& row : rows) emit(row);
}

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void write_csv(std::ostream& out, const std::vector<SolveReport>& reports) {
  const auto& columns = report_columns();
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_cell(columns[c]);
  out << '\n';
  for (const auto& r : reports) {
    const auto cells = row_cells(r, kExactDigits);
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << csv_cell(cells[c]);
    out << '\n';
  }
}

nlohmann::json trace_to_json(const OuterTrace& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& it : trace) {
    out.push_back({{"k", it.k},
                   {"x", vector_json(it.x)},
                   {"t", it.t},
                   {"lambda", vector_json(it.lambda)},
                   {"lambda_bar", vector_json(it.lambda_bar)},
                   {"r", it.r},
                   {"r_next", it.r_next},
                   {"s", it.s},
                   {"eps", it.eps},
                   {"h_norm_prev", it.h_norm_prev},
                   {"h_norm", it.h_norm},
                   {"kkt_residual", it.kkt_residual},
                   {"inner_grad_norm", it.inner_grad_norm},
                   {"inner_iterations", it.inner_iterations},
                   {"inner_status", to_string(it.inner_status)}});
  }
  return out;
}

nlohmann::json report_to_json(const SolveReport& r) {
  return {{"problem", r.problem_id},
          {"driver", to_string(r.driver)},
          {"inform", r.inform},
          {"annotation", r.annotation},
          {"outer_iterations", r.outer_iterations},
          {"inner_iterations", r.inner_iterations},
          {"x", vector_json(r.x)},
          {"f", r.f},
          {"lambda", vector_json(r.lambda)},
          {"lambda_effective", vector_json(r.lambda_effective)},
          {"t", r.t},
          {"r", r.r},
          {"infeasibility", r.infeasibility},
          {"kkt_residual", r.kkt_residual},
          {"trace", trace_to_json(r.trace)}};
}

nlohmann::json reports_to_json(const std::vector<SolveReport>& reports) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : reports) runs.push_back(report_to_json(r));
  return {{"version", kTraceVersion}, {"runs", std::move(runs)}};
}

void write_reports(std::ostream& out, const std::vector<SolveReport>& reports,
                   OutputFormat format) {
  switch (format) {
    case OutputFormat::table: write_table(out, reports); break;
    case OutputFormat::csv: write_csv(out, reports); break;
    case OutputFormat::json: out << reports_to_json(reports).dump(2) << '\n'; break;
  }
}

}  // namespace sharpal
