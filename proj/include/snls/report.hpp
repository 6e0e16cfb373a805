#pragma once

// Text artifacts. Every floating-point value is printed with 17 significant
// digits ("%.17g"), so f64 values survive a text round-trip; non-finite
// values print as null (JSON) or nan/inf/-inf (CSV).

#include <string>
#include <vector>

#include <json.hpp>

namespace snls {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

/// Pretty-printed JSON with insertion-ordered keys and a trailing newline.
std::string dump_json(const Json& value);

/// Column-oriented numeric table written as CSV with a header row.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws kParameter if the row width differs from the column count.
  void add_row(std::vector<double> row);
  std::string to_csv() const;
};

/// Throws kIo on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Selects `columns` from a series CSV and writes a whitespace-delimited
/// file whose first line is "# <col> <col> ...". Field text is copied
/// verbatim. Unknown columns throw kConfig with the available names;
/// a CSV without data rows gives a header-only file.
void emit_plot_data(const std::string& series_csv, const std::vector<std::string>& columns,
                    const std::string& output_path);

/// In-memory form of emit_plot_data.
std::string plot_data_text(const std::string& csv_text, const std::vector<std::string>& columns);

}  // namespace snls
