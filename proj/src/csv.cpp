#include "planta/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "planta/error.hpp"

namespace planta {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorCode::ParseError, source + ": missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text, std::string source) {
  CsvTable table;
  table.source = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  // Skip a UTF-8 byte order mark if an editor added one.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    auto line = trim(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(ErrorCode::ParseError, fmt::format("{}: line {}: expected {} fields, got {}",
                                              table.source, line_no, table.header.size(),
                                              fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) fail(ErrorCode::ParseError, table.source + ": empty file");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path), path.string());
}

double parse_field(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& field = table.rows.at(row).at(col);
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty() || !std::isfinite(value)) {
    fail(ErrorCode::ParseError,
         fmt::format("{}: line {}, column {} ('{}'): not a finite number: '{}'", table.source,
                     table.line_numbers.at(row), col + 1, table.header.at(col), field));
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "rename to '" + path.string() + "' failed: " + ec.message());
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{}", value);
}

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value == 0.0 ? 0.0 : value;
  auto text = fmt::format("{:.{}g}", value, digits);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

TimeSeries read_series_csv(const std::filesystem::path& path, Unit unit,
                           std::string_view value_column) {
  auto table = read_csv(path);
  const auto t_col = table.column("t_seconds");
  std::size_t v_col = 0;
  if (value_column.empty()) {
    if (table.header.size() != 2) {
      fail(ErrorCode::ParseError, table.source + ": expected two columns t_seconds,<value>");
    }
    v_col = t_col == 0 ? 1 : 0;
  } else {
    v_col = table.column(value_column);
  }
  std::vector<Sample> samples;
  samples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    samples.push_back({parse_field(table, r, t_col), parse_field(table, r, v_col)});
  }
  return TimeSeries(table.header[v_col], unit, std::move(samples));
}

std::string series_to_csv(const TimeSeries& series, std::string_view value_column) {
  std::string out = fmt::format("t_seconds,{}\n", value_column);
  for (const auto& s : series.samples()) {
    out += format_number(s.t);
    out += ',';
    out += format_number(s.value);
    out += '\n';
  }
  return out;
}

}  // namespace planta
