#include "planta/stem_table.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "planta/csv.hpp"
#include "planta/error.hpp"

namespace planta {

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Unstressed: return "unstressed";
    case Condition::Water: return "water";
    case Condition::Salinity: return "salinity";
  }
  return "unstressed";
}

std::vector<double> StemTable::days() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.day);
  return out;
}

std::vector<double> StemTable::column(Condition c, bool stretched) const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.get(c, stretched));
  return out;
}

TimeSeries StemTable::series(Condition c, bool stretched) const {
  std::vector<Sample> s;
  for (const auto& r : rows) s.push_back({(r.day - 1) * kSecondsPerDay, r.get(c, stretched)});
  return TimeSeries(fmt::format("{}_{}", to_string(c), stretched ? "stretched" : "pristine"),
                    Unit::Millimeter, std::move(s));
}

StemTable parse_stem_table(std::string_view text, std::string source) {
  const CsvTable csv = parse_csv(text, std::move(source));
  std::string header;
  for (std::size_t i = 0; i < csv.header.size(); ++i) header += (i ? "," : "") + csv.header[i];
  if (header != kStemTableHeader) {
    fail(ErrorCode::ParseError,
         fmt::format("{}: expected header '{}', got '{}'", csv.source, kStemTableHeader, header));
  }
  StemTable t;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    StemRow row;
    const double day = parse_field(csv, r, 0);
    if (day != std::floor(day) || std::abs(day) > 1e6) {
      fail(ErrorCode::ParseError,
           fmt::format("{}: line {}, column 1 (day): day must be an integer", csv.source, csv.line_numbers[r]));
    }
    row.day = static_cast<int>(day);
    for (std::size_t c = 0; c < 6; ++c) {
      const double d = parse_field(csv, r, c + 1);
      if (!(d > 3.0 && d < 15.0)) {
        fail(ErrorCode::InvariantViolation,
             fmt::format("{}: line {}, column {} ({}): diameter {} mm outside (3, 15)",
                         csv.source, csv.line_numbers[r], c + 2, csv.header[c + 1], d));
      }
      row.diameters[c] = d;
    }
    if (!t.rows.empty() && row.day <= t.rows.back().day) {
      fail(ErrorCode::InvariantViolation,
           fmt::format("{}: line {}: day {} does not follow day {}", csv.source, csv.line_numbers[r],
                       row.day, t.rows.back().day));
    }
    t.rows.push_back(row);
  }
  if (t.rows.empty()) fail(ErrorCode::InsufficientData, csv.source + ": no rows");
  return t;
}

StemTable read_stem_table(const std::filesystem::path& path) {
  return parse_stem_table(read_text_file(path), path.string());
}

std::array<OffsetStats, 3> stretched_offset_check(const StemTable& table) {
  std::array<OffsetStats, 3> out{};
  if (table.rows.empty()) return out;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto c = static_cast<Condition>(k);
    std::vector<double> diffs;
    for (const auto& r : table.rows) diffs.push_back(std::abs(r.get(c, false) - r.get(c, true)));
    double sum = 0.0;
    for (double d : diffs) sum += d;
    out[k].mean = sum / static_cast<double>(diffs.size());
    out[k].max = *std::max_element(diffs.begin(), diffs.end());
    for (double d : diffs) out[k].max_deviation = std::max(out[k].max_deviation, std::abs(d - out[k].mean));
  }
  return out;
}

}  // namespace planta
