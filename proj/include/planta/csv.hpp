#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "planta/time_series.hpp"

namespace planta {

// Minimal comma-separated reader: no quoting, '.' decimal point, blank lines
// and lines starting with '#' skipped. Good enough for the numeric files this
// project reads and writes.
struct CsvTable {
  std::string source;  // file name or "<memory>", used in error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, parallel to rows

  std::size_t column(std::string_view name) const;  // throws ParseError if absent
};

CsvTable parse_csv(std::string_view text, std::string source = "<memory>");
CsvTable read_csv(const std::filesystem::path& path);

/// Parses one numeric field; errors name the source, line and column.
double parse_field(const CsvTable& table, std::size_t row, std::size_t col);

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never observe a
/// partially written file.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

/// Rounds to `digits` significant digits (used for stable golden output).
double round_significant(double value, int digits = 6);

/// Reads a two-column time-series CSV `t_seconds,<value_column>`. When
/// `value_column` is empty the second column is used whatever its name.
TimeSeries read_series_csv(const std::filesystem::path& path, Unit unit,
                           std::string_view value_column = {});
std::string series_to_csv(const TimeSeries& series, std::string_view value_column);

}  // namespace planta
