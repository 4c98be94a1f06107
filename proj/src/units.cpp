#include "planta/units.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "planta/error.hpp"

namespace planta {

namespace {

struct UnitInfo {
  Unit unit;
  std::string_view tag;
  Unit base;
  double scale;  // value_in_base = value * scale
};

constexpr std::array<UnitInfo, 24> kUnits{{
    {Unit::Dimensionless, "1", Unit::Dimensionless, 1.0},
    {Unit::Celsius, "degC", Unit::Celsius, 1.0},
    {Unit::PercentRh, "pct_rh", Unit::PercentRh, 1.0},
    {Unit::Kilopascal, "kPa", Unit::Kilopascal, 1.0},
    {Unit::Volt, "V", Unit::Volt, 1.0},
    {Unit::Ampere, "A", Unit::Ampere, 1.0},
    {Unit::Ohm, "ohm", Unit::Ohm, 1.0},
    {Unit::Farad, "F", Unit::Farad, 1.0},
    {Unit::Watt, "W", Unit::Watt, 1.0},
    {Unit::Joule, "J", Unit::Joule, 1.0},
    {Unit::Meter, "m", Unit::Meter, 1.0},
    {Unit::Millimeter, "mm", Unit::Meter, 1e-3},
    {Unit::Micrometer, "um", Unit::Meter, 1e-6},
    {Unit::Nanometer, "nm", Unit::Meter, 1e-9},
    {Unit::SquareMeter, "m2", Unit::SquareMeter, 1.0},
    {Unit::Strain, "strain", Unit::Strain, 1.0},
    {Unit::RelResistance, "rel", Unit::RelResistance, 1.0},
    {Unit::Degree, "deg", Unit::Degree, 1.0},
    {Unit::Second, "s", Unit::Second, 1.0},
    {Unit::Minute, "min", Unit::Second, 60.0},
    {Unit::Hour, "h", Unit::Second, 3600.0},
    {Unit::Day, "day", Unit::Second, 86400.0},
    {Unit::Hertz, "Hz", Unit::Hertz, 1.0},
    {Unit::Gram, "g", Unit::Gram, 1.0},
}};

const UnitInfo& info(Unit unit) {
  for (const auto& u : kUnits) {
    if (u.unit == unit) return u;
  }
  fail(ErrorCode::InvalidArgument, "unknown unit enumerator");
}

}  // namespace

std::string_view unit_tag(Unit unit) { return info(unit).tag; }

Unit parse_unit(std::string_view tag) {
  for (const auto& u : kUnits) {
    if (u.tag == tag) return u.unit;
  }
  // A few spellings that show up in hand-edited files.
  static constexpr std::array<std::pair<std::string_view, Unit>, 6> kAliases{{
      {"C", Unit::Celsius},
      {"%RH", Unit::PercentRh},
      {"pct", Unit::PercentRh},
      {"Ohm", Unit::Ohm},
      {"", Unit::Dimensionless},
      {"seconds", Unit::Second},
  }};
  for (const auto& [alias, unit] : kAliases) {
    if (alias == tag) return unit;
  }
  fail(ErrorCode::ParseError, "unknown unit tag '" + std::string(tag) + "'");
}

Unit base_unit(Unit unit) { return info(unit).base; }

double to_base(double value, Unit unit) { return value * info(unit).scale; }

double from_base(double value, Unit unit) { return value / info(unit).scale; }

double convert(double value, Unit from, Unit to) {
  if (from == to) return value;
  if (base_unit(from) != base_unit(to)) {
    fail(ErrorCode::InvalidArgument, "cannot convert " + std::string(unit_tag(from)) +
                                         " to " + std::string(unit_tag(to)));
  }
  return from_base(to_base(value, from), to);
}

void require_rh(double rh_pct, std::string_view what) {
  if (!std::isfinite(rh_pct) || rh_pct < 0.0 || rh_pct > 100.0) {
    fail(ErrorCode::OutOfDomain,
         std::string(what) + " " + std::to_string(rh_pct) + " %RH outside [0, 100]");
  }
}

}  // namespace planta
