#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "planta/error.hpp"
#include "planta/time_series.hpp"

namespace test {

// Small deterministic generator for property tests (xorshift64*).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545f4914f6cdd1dULL;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t s_;
};

template <class F>
planta::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const planta::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected planta::Error, nothing thrown");
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline planta::TimeSeries make_series(const std::vector<double>& t, const std::vector<double>& v,
                                      planta::Unit unit = planta::Unit::Dimensionless) {
  std::vector<planta::Sample> s;
  for (std::size_t i = 0; i < t.size(); ++i) s.push_back({t[i], v[i]});
  return planta::TimeSeries("x", unit, std::move(s));
}

inline std::filesystem::path data_dir() { return PLANTA_TEST_DATA_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("planta_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace test
