#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

namespace planta {

inline constexpr int kReportSchemaVersion = 1;

std::string tool_version();

/// Skeleton report: schema_version, tool_version and kind.
nlohmann::json make_report(std::string_view kind);

/// Copy with every floating-point leaf rounded to 6 significant digits.
nlohmann::json rounded(const nlohmann::json& doc);

/// Keys sorted, two-space indent, floats at 6 significant digits, trailing
/// newline. Identical documents always serialise to identical bytes.
std::string write_report(const nlohmann::json& doc);

/// Parses and checks the schema version. Throws ParseError.
nlohmann::json parse_report(std::string_view text);

/// Every numeric leaf must sit under a key ending in a unit suffix
/// (`_kpa`, `_mm_per_day`, `_count`, ...). Throws InvariantViolation naming
/// the first offending path.
void check_unit_suffixes(const nlohmann::json& doc);

}  // namespace planta
