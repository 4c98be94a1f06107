#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "planta/time_series.hpp"

namespace planta {

enum class Condition { Unstressed, Water, Salinity };

std::string_view to_string(Condition c);

struct StemRow {
  int day = 0;
  // mm; {unstressed, water, salinity} x {pristine, stretched}
  std::array<double, 6> diameters{};

  double get(Condition c, bool stretched) const {
    return diameters[static_cast<std::size_t>(c) * 2 + (stretched ? 1 : 0)];
  }
};

struct StemTable {
  std::vector<StemRow> rows;

  std::vector<double> days() const;
  std::vector<double> column(Condition c, bool stretched) const;
  /// Diameters as a series in mm with day 1 at t = 0.
  TimeSeries series(Condition c, bool stretched = false) const;
};

inline constexpr std::string_view kStemTableHeader =
    "day,unstressed_pristine,unstressed_stretched,water_pristine,water_stretched,"
    "salinity_pristine,salinity_stretched";

/// Throws ParseError (with line and column) for malformed input and
/// InvariantViolation for non-increasing days or diameters outside (3, 15) mm.
StemTable parse_stem_table(std::string_view text, std::string source = "<memory>");
StemTable read_stem_table(const std::filesystem::path& path);

struct OffsetStats {
  double mean = 0.0;            // mm, mean |pristine - stretched|
  double max = 0.0;             // mm, largest |pristine - stretched|
  double max_deviation = 0.0;   // mm, largest departure from the mean
};

std::array<OffsetStats, 3> stretched_offset_check(const StemTable& table);

}  // namespace planta
