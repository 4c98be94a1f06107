#include "planta/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>

#include "planta/csv.hpp"
#include "planta/error.hpp"

#ifndef PLANTA_DEFAULT_DATA_DIR
#define PLANTA_DEFAULT_DATA_DIR "data"
#endif

namespace planta {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

struct LineParser {
  const std::string& source;
  std::size_t line;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, fmt::format("{}:{}: {}", source, line, what));
  }

  std::string_view strip_comment(std::string_view s) const {
    const auto hash = s.find('#');
    return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
  }

  double parse_number(std::string_view s) const {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      error(fmt::format("'{}' is not a finite number", s));
    }
    return v;
  }

  ConfigValue parse_value(std::string_view s) const {
    s = trim(s);
    if (s.empty()) error("missing value");
    if (s.front() == '"') {
      std::string out;
      std::size_t i = 1;
      for (; i < s.size() && s[i] != '"'; ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          const char e = s[++i];
          switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            default: error(fmt::format("unsupported escape '\\{}'", e));
          }
        } else {
          out += s[i];
        }
      }
      if (i == s.size()) error("unterminated string");
      if (!strip_comment(s.substr(i + 1)).empty()) error("trailing text after string");
      return out;
    }
    s = strip_comment(s);
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '[') {
      if (s.back() != ']') error("arrays must close on the same line");
      std::vector<double> out;
      std::string_view body = trim(s.substr(1, s.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        out.push_back(parse_number(body.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
      }
      return out;
    }
    return parse_number(s);
  }
};

}  // namespace

Config Config::parse(std::string_view text, std::string source) {
  Config cfg;
  cfg.source_ = std::move(source);
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const LineParser p{cfg.source_, line_no};
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const std::string_view head = p.strip_comment(line);
      if (head.back() != ']') p.error("malformed section header");
      const std::string_view name = trim(head.substr(1, head.size() - 2));
      if (!valid_name(name)) p.error(fmt::format("invalid section name '{}'", name));
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.error("expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    if (!valid_name(key)) p.error(fmt::format("invalid key '{}'", key));
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (cfg.entries_.count(full) != 0) p.error(fmt::format("duplicate key '{}'", full));
    cfg.entries_.emplace(full, Entry{p.parse_value(line.substr(eq + 1)), line_no});
  }
  return cfg;
}

Config Config::read(const std::filesystem::path& path) {
  Config cfg = parse(read_text_file(path), path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

void Config::type_error(const std::string& key, const Entry& e, const char* want) const {
  fail(ErrorCode::ParseError, fmt::format("{}:{}: '{}' must be {}", source_, e.line, key, want));
}

double Config::number(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) fail(ErrorCode::ParseError, fmt::format("{}: missing key '{}'", source_, key));
  if (const auto* v = std::get_if<double>(&e->value)) return *v;
  type_error(key, *e, "a number");
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  if (const auto* v = std::get_if<std::string>(&e->value)) return *v;
  type_error(key, *e, "a string");
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  if (const auto* v = std::get_if<bool>(&e->value)) return *v;
  type_error(key, *e, "true or false");
}

std::vector<double> Config::numbers_or(const std::string& key, std::vector<double> fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  if (const auto* v = std::get_if<std::vector<double>>(&e->value)) return *v;
  type_error(key, *e, "an array of numbers");
}

std::size_t Config::count_or(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    type_error(key, entries_.at(key), "a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

void Config::require_all_used() const {
  for (const auto& [key, e] : entries_) {
    if (used_.count(key) == 0) {
      fail(ErrorCode::ParseError, fmt::format("{}:{}: unknown key '{}'", source_, e.line, key));
    }
  }
}

std::filesystem::path data_dir() {
  const char* env = std::getenv("PLANTA_DATA_DIR");
  if (env != nullptr && *env != '\0') return env;
  return PLANTA_DEFAULT_DATA_DIR;
}

}  // namespace planta
