#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace planta {

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;

/// Key-value configuration in a TOML-compatible subset: `[section]` headers,
/// `key = value` lines with numbers, "strings", true/false and one-line
/// numeric arrays, and `#` comments. Keys are addressed as "section.key".
///
/// Every lookup marks its key as used; require_all_used() rejects leftovers so
/// misspelt keys fail loudly instead of being ignored.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text, std::string source = "<memory>");
  static Config read(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::vector<std::string> keys() const;
  const std::string& source() const { return source_; }
  /// Directory of the file the config came from; relative paths in values
  /// resolve against it.
  const std::filesystem::path& base_dir() const { return base_dir_; }

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback) const;
  /// number_or, then checks it is a non-negative integer.
  std::size_t count_or(const std::string& key, std::size_t fallback) const;

  void require_all_used() const;

 private:
  struct Entry {
    ConfigValue value;
    std::size_t line = 0;
  };
  const Entry* find(const std::string& key) const;
  [[noreturn]] void type_error(const std::string& key, const Entry& e, const char* want) const;

  std::string source_ = "<memory>";
  std::filesystem::path base_dir_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

/// Directory holding the shipped fixtures and calibration tables: the
/// PLANTA_DATA_DIR environment variable when set, else the build-time default.
std::filesystem::path data_dir();

}  // namespace planta
