#include <doctest.h>

#include <cmath>
#include <string>

#include "planta/stats.hpp"
#include "planta/stem_table.hpp"
#include "support.hpp"

using namespace planta;
using test::error_code_of;

namespace {
// OLS slopes over days 1..40 of the shipped table, computed independently.
constexpr double kSlopeUnstressed = 0.00981332;
constexpr double kSlopeWater = -0.0102692;
constexpr double kSlopeSalinity = -0.00950844;
}  // namespace

TEST_CASE("shipped stem table") {
  const auto t = read_stem_table(test::data_dir() / "stem_diameters.csv");
  REQUIRE(t.rows.size() == 40);
  CHECK(t.rows.front().day == 1);
  CHECK(t.rows.back().day == 40);
  CHECK(t.rows.front().get(Condition::Unstressed, false) == 6.43);
  CHECK(t.rows.front().get(Condition::Water, false) == 6.87);
  CHECK(t.rows.front().get(Condition::Salinity, false) == 6.52);
  CHECK(t.rows.back().get(Condition::Unstressed, false) == 6.80);
  CHECK(t.rows.back().get(Condition::Water, false) == 6.47);
  CHECK(t.rows.back().get(Condition::Salinity, false) == 6.15);

  const auto days = t.days();
  const double s_u = ols_slope(days, t.column(Condition::Unstressed, false));
  const double s_w = ols_slope(days, t.column(Condition::Water, false));
  const double s_s = ols_slope(days, t.column(Condition::Salinity, false));
  CHECK(s_u == doctest::Approx(kSlopeUnstressed).epsilon(1e-5));
  CHECK(s_w == doctest::Approx(kSlopeWater).epsilon(1e-5));
  CHECK(s_s == doctest::Approx(kSlopeSalinity).epsilon(1e-5));
  CHECK(std::abs(s_u - 0.0095) <= 5e-4);
  CHECK(std::abs(s_w + 0.0103) <= 5e-4);
  CHECK(std::abs(s_s + 0.0095) <= 5e-4);

  const auto series = t.series(Condition::Water);
  CHECK(series.front().t == 0.0);
  CHECK(series.back().t == 39 * 86400.0);
  CHECK(series.unit() == Unit::Millimeter);
}

TEST_CASE("stretched sensors read a constant offset below the pristine ones") {
  const auto t = read_stem_table(test::data_dir() / "stem_diameters.csv");
  const auto off = stretched_offset_check(t);
  const double expect[3] = {0.010, 0.015, 0.017};
  for (int i = 0; i < 3; ++i) {
    CHECK(off[i].mean == doctest::Approx(expect[i]).epsilon(1e-9));
    CHECK(off[i].max_deviation <= 1e-12);
  }
}

TEST_CASE("stem table parse errors carry the location") {
  const std::string header = std::string(kStemTableHeader) + "\n";
  try {
    parse_stem_table(header + "1,6.4,6.4,6.8,6.8,6.5,6.5\n2,6.4,abc,6.8,6.8,6.5,6.5\n", "t.csv");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    const std::string msg = e.what();
    CHECK(msg.find("t.csv") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column 3") != std::string::npos);
  }
  CHECK(error_code_of([&] { parse_stem_table("day,a\n1,2\n"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([&] { parse_stem_table(header + "1,6.4,6.4,6.8\n"); }) ==
        ErrorCode::ParseError);
  CHECK(error_code_of([&] { parse_stem_table(header); }) == ErrorCode::InsufficientData);
  CHECK(error_code_of([&] {
          parse_stem_table(header + "2,6.4,6.4,6.8,6.8,6.5,6.5\n1,6.4,6.4,6.8,6.8,6.5,6.5\n");
        }) == ErrorCode::InvariantViolation);
  CHECK(error_code_of([&] { parse_stem_table(header + "1,64,6.4,6.8,6.8,6.5,6.5\n"); }) ==
        ErrorCode::InvariantViolation);
  CHECK(error_code_of([&] { read_stem_table("/nonexistent/table.csv"); }) == ErrorCode::Io);
}
