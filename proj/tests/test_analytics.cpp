#include <doctest.h>

#include <cmath>
#include <numbers>

#include "planta/analytics.hpp"
#include "planta/stem_table.hpp"
#include "support.hpp"

using namespace planta;
using namespace planta::analytics;
using test::error_code_of;

namespace {
constexpr double kDay = 86400.0;

// Reference values from a 30-digit evaluation of the Tetens form.
constexpr double kVpSat25 = 3.16707440812508863;
constexpr double kVpAir25x60 = 1.90024464487505318;
constexpr double kVpd25x60 = 1.26682976325003545;

TimeSeries daily(const std::vector<double>& values, Unit unit) {
  std::vector<double> t;
  for (std::size_t i = 0; i < values.size(); ++i) t.push_back(static_cast<double>(i) * kDay);
  return test::make_series(t, values, unit);
}

TimeSeries linear_daily(double start, double slope, int days, Unit unit) {
  std::vector<double> v;
  for (int i = 0; i < days; ++i) v.push_back(start + slope * i);
  return daily(v, unit);
}
}  // namespace

TEST_CASE("vapour pressures") {
  CHECK(saturation_vapor_pressure(0) == 0.6107);
  const auto r = vapor_pressures({25, 25, 60});
  CHECK(std::abs(r.vp_sat - kVpSat25) <= 1e-12);
  CHECK(std::abs(r.vp_air - kVpAir25x60) <= 1e-12);
  CHECK(std::abs(r.vpd - kVpd25x60) <= 1e-12);
  CHECK_FALSE(r.negative);
  CHECK(vapor_pressures({25, 25, 100}).vpd == 0.0);
  const auto neg = vapor_pressures({20, 35, 95});
  CHECK(neg.negative);
  CHECK(neg.vpd < 0);
  CHECK(error_code_of([] { vapor_pressures({61, 25, 50}); }) == ErrorCode::SanityRange);
  CHECK(error_code_of([] { vapor_pressures({25, -21, 50}); }) == ErrorCode::SanityRange);
  CHECK(error_code_of([] { vapor_pressures({25, 25, 101}); }) == ErrorCode::SanityRange);
}

TEST_CASE("property: saturation pressure increases on a 0.1 degC grid") {
  double prev = saturation_vapor_pressure(-20);
  for (int i = -199; i <= 600; ++i) {
    const double v = saturation_vapor_pressure(0.1 * i);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("property: equal temperatures leave only the humidity deficit") {
  test::Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform(-20, 60);
    const double rh = rng.uniform(0, 100);
    CHECK(vapor_pressures({t, t, 100}).vpd == 0.0);
    const double expect = saturation_vapor_pressure(t) * (1 - rh / 100);
    CHECK(std::abs(vapor_pressures({t, t, rh}).vpd - expect) <= 1e-12);
  }
}

TEST_CASE("classifier rules") {
  const ClassifierConfig cfg;
  CHECK(classify_slopes(0.05, -0.01, cfg) == StressClass::WaterStress);
  CHECK(classify_slopes(-0.05, -0.01, cfg) == StressClass::SalinityStress);
  CHECK(classify_slopes(0.0, 0.0, cfg) == StressClass::Healthy);
  CHECK(classify_slopes(0.01, 0.01, cfg) == StressClass::Healthy);
  CHECK(classify_slopes(0.01, -0.01, cfg) == StressClass::Indeterminate);
  CHECK(classify_slopes(0.05, 0.01, cfg) == StressClass::Indeterminate);
  CHECK(classify_slopes(0.0, -cfg.tau_diameter, cfg) == StressClass::Healthy);
  CHECK(parse_stress_class("WATER_STRESS") == StressClass::WaterStress);
  CHECK(error_code_of([] { parse_stress_class("dry"); }) == ErrorCode::ParseError);
}

TEST_CASE("classify shipped stem diameters with condition-consistent VPD") {
  const auto table = read_stem_table(test::data_dir() / "stem_diameters.csv");
  const auto flat = linear_daily(1.2, 0.0, 40, Unit::Kilopascal);
  const auto rising = linear_daily(1.0, 0.04, 40, Unit::Kilopascal);
  const auto falling = linear_daily(1.6, -0.04, 40, Unit::Kilopascal);

  const auto h = classify_stress(flat, table.series(Condition::Unstressed, false));
  CHECK(h.label == StressClass::Healthy);
  const auto w = classify_stress(rising, table.series(Condition::Water, false));
  CHECK(w.label == StressClass::WaterStress);
  CHECK(w.diameter_slope < -0.003);
  const auto s = classify_stress(falling, table.series(Condition::Salinity, false));
  CHECK(s.label == StressClass::SalinityStress);

  const auto flat_dia = linear_daily(6.5, 0.0, 40, Unit::Millimeter);
  CHECK(classify_stress(flat, flat_dia).label == StressClass::Healthy);

  // Diameters in metres give the same answer.
  CHECK(classify_stress(rising, table.series(Condition::Water, false).converted(Unit::Meter))
            .diameter_slope ==
        doctest::Approx(w.diameter_slope).epsilon(1e-12));
  CHECK(error_code_of([&] { classify_stress(daily({1.0}, Unit::Kilopascal), flat_dia); }) ==
        ErrorCode::InsufficientData);
}

TEST_CASE("property: classification ignores time shifts and constant offsets") {
  test::Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const auto vpd = linear_daily(rng.uniform(0.5, 2), rng.uniform(-0.08, 0.08), 20,
                                  Unit::Kilopascal);
    const auto dia = linear_daily(rng.uniform(5, 8), rng.uniform(-0.02, 0.02), 20,
                                  Unit::Millimeter);
    const auto base = classify_stress(vpd, dia);
    const double dt = rng.uniform(-1e6, 1e6);
    const auto moved = classify_stress(vpd.shifted(dt, rng.uniform(-0.5, 0.5)),
                                       dia.shifted(dt, rng.uniform(-1, 1)));
    CHECK(moved.label == base.label);
    CHECK(moved.vpd_slope == doctest::Approx(base.vpd_slope).epsilon(1e-9).scale(1e-6));
    CHECK(moved.diameter_slope == doctest::Approx(base.diameter_slope).epsilon(1e-9).scale(1e-6));
  }
}

TEST_CASE("daily means sit at midday") {
  const auto s = test::make_series({0, 3600, kDay + 10, kDay + 20}, {1, 3, 10, 20});
  const auto m = daily_means(s);
  REQUIRE(m.size() == 2);
  CHECK(m[0].t == 0.5 * kDay);
  CHECK(m[0].value == 2.0);
  CHECK(m[1].value == 15.0);
}

namespace {

// Smooth humidity trace with several incommensurate periods so the
// correlation has a single clear peak.
double trace(double t) {
  const double h = t / 3600.0;
  return 60 + 8 * std::sin(2 * std::numbers::pi * h / 24) + 3 * std::sin(2 * std::numbers::pi * h / 7.3) +
         1.5 * std::sin(2 * std::numbers::pi * h / 2.9);
}

std::pair<TimeSeries, TimeSeries> shifted_pair(double lag, double step, double hours) {
  std::vector<double> t, lo, up;
  for (double x = 0; x <= hours * 3600; x += step) {
    t.push_back(x);
    lo.push_back(trace(x));
    up.push_back(trace(x - lag));
  }
  return {test::make_series(t, lo, Unit::PercentRh), test::make_series(t, up, Unit::PercentRh)};
}

}  // namespace

TEST_CASE("translocation lag of 225 minutes at 1-minute sampling") {
  const auto [lo, up] = shifted_pair(225 * 60, 60, 48);
  LagConfig cfg;
  cfg.equal_tol = 100;
  const auto r = translocation_lag(lo, up, cfg);
  CHECK(r.sample_period == 60.0);
  CHECK(std::abs(r.lag - 225 * 60) <= r.sample_period);
  CHECK(r.correlation > 0.99);
}

TEST_CASE("property: lag recovers random shifts within one sample") {
  test::Rng rng(57);
  for (int i = 0; i < 20; ++i) {
    const double step = rng.uniform(30, 300);
    const double lag = rng.uniform(0, 6 * 3600);
    const auto [lo, up] = shifted_pair(lag, step, 60);
    const auto r = estimate_lag(lo, up, {});
    CHECK(std::abs(r.lag - lag) <= step);
  }
}

TEST_CASE("lag edge cases") {
  const auto [lo, up] = shifted_pair(0, 60, 24);
  LagConfig cfg;
  const auto same = translocation_lag(lo, lo, cfg);
  CHECK(same.lag == 0.0);
  CHECK(same.equalization_time == 0.0);

  std::vector<double> t;
  for (int i = 0; i < 100; ++i) t.push_back(60.0 * i);
  const auto a = test::make_series(t, std::vector<double>(100, 50), Unit::PercentRh);
  const auto b = test::make_series(t, std::vector<double>(100, 60), Unit::PercentRh);
  CHECK(error_code_of([&] { translocation_lag(a, b, cfg); }) == ErrorCode::InsufficientData);
  CHECK(error_code_of([] {
          translocation_lag(test::make_series({0}, {1}), test::make_series({0}, {1}), {});
        }) == ErrorCode::InsufficientData);
}

TEST_CASE("equalisation after watering") {
  // Upper leaf lags the lower one by 30 min; after watering both converge on 80 %RH.
  std::vector<double> t, lo, up;
  const double water = 2 * 3600.0;
  for (double x = 0; x <= 12 * 3600; x += 60) {
    auto f = [&](double s) {
      const double wig = 0.5 * std::sin(s / 1500.0);
      return s < water ? 50 + wig : 80 - 30 * std::exp(-(s - water) / 1800.0) + wig;
    };
    t.push_back(x);
    lo.push_back(f(x));
    up.push_back(f(x - 1800));
  }
  LagConfig cfg;
  cfg.watering_time = water;
  cfg.equal_tol = 1.0;
  const auto r = translocation_lag(test::make_series(t, lo), test::make_series(t, up), cfg);
  CHECK(std::abs(r.lag - 1800) <= 60);
  CHECK(r.equalization_time > 0);
  CHECK(r.equalization_time < 8 * 3600);

  // Two traces that never meet.
  std::vector<double> far;
  for (double v : lo) far.push_back(v + 20);
  CHECK(error_code_of([&] {
          translocation_lag(test::make_series(t, lo), test::make_series(t, far), cfg);
        }) == ErrorCode::NoEqualization);
}

TEST_CASE("impedance model") {
  const ImpedanceCircuit c{100, 1000, 1e-6};
  CHECK(std::abs(impedance(c, 0) - std::complex<double>(1100, 0)) <= 1e-9);
  CHECK(std::abs(impedance(c, INFINITY) - std::complex<double>(100, 0)) <= 1e-9);
  CHECK(std::abs(impedance(c, 1e12) - std::complex<double>(100, 0)) <= 1e-6);
  CHECK(measured_impedance(10e-3, 10e-6) == doctest::Approx(1000).epsilon(1e-15));
  CHECK(error_code_of([] { measured_impedance(0.01, 0); }) == ErrorCode::ZeroCurrent);
  CHECK(error_code_of([] { impedance({0, 1, 1}, 1); }) == ErrorCode::NonPositive);
  const auto grid = log_frequency_grid(1, 1000, 31);
  CHECK(grid.front() == 1.0);
  CHECK(grid.back() == 1000.0);
  CHECK(grid[10] == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("property: |Z| falls with frequency and the circuit stays capacitive") {
  test::Rng rng(59);
  const auto grid = log_frequency_grid(1, 1000, 200);
  for (int trial = 0; trial < 200; ++trial) {
    const ImpedanceCircuit c{std::exp(rng.uniform(0, 10)), std::exp(rng.uniform(0, 12)),
                             std::exp(rng.uniform(-18, -3))};
    double prev = std::abs(impedance(c, 0));
    for (double f : grid) {
      const auto z = impedance(c, f);
      CHECK(std::abs(z) <= prev);
      CHECK(z.imag() <= 0.0);
      prev = std::abs(z);
    }
  }
}
