#include "planta/report.hpp"

#include <array>
#include <cmath>

#include "planta/csv.hpp"
#include "planta/error.hpp"

#ifndef PLANTA_VERSION
#define PLANTA_VERSION "0.0.0"
#endif

namespace planta {

std::string tool_version() { return PLANTA_VERSION; }

nlohmann::json make_report(std::string_view kind) {
  nlohmann::json doc = nlohmann::json::object();
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool_version"] = tool_version();
  doc["kind"] = std::string(kind);
  return doc;
}

nlohmann::json rounded(const nlohmann::json& doc) {
  if (doc.is_number_float()) {
    const double v = doc.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return round_significant(v, 6);
  }
  if (doc.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : doc.items()) out[k] = rounded(v);
    return out;
  }
  if (doc.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : doc) out.push_back(rounded(v));
    return out;
  }
  return doc;
}

std::string write_report(const nlohmann::json& doc) { return rounded(doc).dump(2) + "\n"; }

nlohmann::json parse_report(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    fail(ErrorCode::ParseError, "report has no integer schema_version");
  }
  if (doc["schema_version"].get<int>() != kReportSchemaVersion) {
    fail(ErrorCode::ParseError, "unsupported report schema_version " +
                                    doc["schema_version"].dump());
  }
  return doc;
}

namespace {

constexpr std::array kSuffixes = {
    "_version", "_count",  "_fraction", "_kpa",   "_kpa_per_day", "_mm",   "_mm_per_day",
    "_m",       "_m2",     "_um",       "_w",     "_w_per_m2",    "_uw_per_cm2", "_j",
    "_v",       "_a",      "_ohm",      "_f",     "_s",           "_min",  "_h",
    "_days",    "_hz",     "_g",        "_pct",   "_degc",        "_deg",  "_rel",
    "_strain",  "_g_per_mol", "_j_per_mol", "_degc_per_day", "_pct_per_day", "_bits"};

bool has_suffix(std::string_view key) {
  for (std::string_view s : kSuffixes) {
    if (key.size() > s.size() && key.substr(key.size() - s.size()) == s) return true;
  }
  return false;
}

void check(const nlohmann::json& node, const std::string& path, std::string_view key) {
  if (node.is_number()) {
    if (!has_suffix(key)) {
      fail(ErrorCode::InvariantViolation, "numeric field '" + path + "' has no unit suffix");
    }
  } else if (node.is_object()) {
    for (const auto& [k, v] : node.items()) check(v, path.empty() ? k : path + "." + k, k);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      check(node[i], path + "[" + std::to_string(i) + "]", key);
    }
  }
}

}  // namespace

void check_unit_suffixes(const nlohmann::json& doc) { check(doc, "", ""); }

}  // namespace planta
