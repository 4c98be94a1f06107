#pragma once

#include <string_view>

namespace planta {

// Internal computation uses the base unit of each dimension (degC, %RH, kPa,
// V, A, ohm, F, W, J, m, s, deg). Scaled units only appear at I/O boundaries
// and are converted on the way in.
enum class Unit {
  Dimensionless,
  Celsius,
  PercentRh,
  Kilopascal,
  Volt,
  Ampere,
  Ohm,
  Farad,
  Watt,
  Joule,
  Meter,
  Millimeter,
  Micrometer,
  Nanometer,
  SquareMeter,
  Strain,
  RelResistance,
  Degree,
  Second,
  Minute,
  Hour,
  Day,
  Hertz,
  Gram,
};

std::string_view unit_tag(Unit unit);

/// Parses a unit tag as written in CSV headers and config files ("mm",
/// "degC", "pct_rh", ...). Throws Error(ParseError) on unknown tags.
Unit parse_unit(std::string_view tag);

Unit base_unit(Unit unit);
double to_base(double value, Unit unit);
double from_base(double value, Unit unit);

/// Converts between two units of the same dimension.
double convert(double value, Unit from, Unit to);

inline constexpr double kSecondsPerDay = 86400.0;

/// Rejects relative humidity outside [0, 100] instead of clipping it.
void require_rh(double rh_pct, std::string_view what = "relative humidity");

}  // namespace planta
