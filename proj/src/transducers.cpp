#include "planta/transducers.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "planta/error.hpp"

namespace planta::transducers {

void TempSensorModel::validate() const {
  if (!(alpha < 0.0)) fail(ErrorCode::InvalidArgument, "temperature coefficient must be negative");
  if (!(r0 > 0.0)) fail(ErrorCode::NonPositive, "r0 must be > 0");
  if (!(range_low < range_high)) fail(ErrorCode::InvalidArgument, "empty temperature range");
  if (!(hysteresis_band >= 0.0)) fail(ErrorCode::InvalidArgument, "hysteresis band must be >= 0");
  // The linear model must stay positive over the range.
  if (!(1.0 + alpha * (range_high - t_ref) > 0.0)) {
    fail(ErrorCode::InvalidArgument, "resistance would go non-positive within the range");
  }
}

CalibrationTable default_humidity_curve() {
  return CalibrationTable::linear(0.0, 100.0, 0.0, 0.42, 11, Extrapolation::Error,
                                  Unit::PercentRh, Unit::Volt);
}

void HumiditySensorModel::validate() const {
  if (!curve.increasing()) {
    fail(ErrorCode::InvariantViolation, "humidity curve must be strictly increasing");
  }
}

void AdcModel::validate() const {
  if (bits < 1 || bits > 31) fail(ErrorCode::InvalidArgument, "ADC bits must be in [1, 31]");
  if (!(vref > 0.0)) fail(ErrorCode::NonPositive, "ADC vref must be > 0");
  if (!(divider_fixed_resistor > 0.0)) fail(ErrorCode::NonPositive, "divider resistor must be > 0");
}

double temp_to_resistance(const TempSensorModel& m, double t_c) {
  if (!(t_c >= m.range_low && t_c <= m.range_high)) {
    fail(ErrorCode::RangeError, fmt::format("temperature {} degC outside sensor range [{}, {}]",
                                            t_c, m.range_low, m.range_high));
  }
  return m.r0 * (1.0 + m.alpha * (t_c - m.t_ref));
}

double resistance_to_temp(const TempSensorModel& m, double r_ohm) {
  const double t = m.t_ref + (r_ohm / m.r0 - 1.0) / m.alpha;
  // A hair of slack so roundtrips at the range ends survive rounding.
  constexpr double slack = 1e-9;
  if (!std::isfinite(t) || t < m.range_low - slack || t > m.range_high + slack) {
    fail(ErrorCode::RangeError,
         fmt::format("resistance {} ohm maps to {} degC, outside sensor range", r_ohm, t));
  }
  return t;
}

HumidityReading rh_from_meg_voltage(const HumiditySensorModel& m, double volts,
                                    double leaf_temp_c) {
  HumidityReading r;
  r.raw_rh = m.curve.invert(volts);
  r.corrected_rh = r.raw_rh + m.temp_correction * (leaf_temp_c - m.t_reference);
  r.rh = std::clamp(r.corrected_rh, 0.0, 100.0);
  r.clamped = r.rh != r.corrected_rh;
  return r;
}

double meg_voltage_from_rh(const HumiditySensorModel& m, double rh_pct) {
  require_rh(rh_pct);
  return m.curve.eval(rh_pct);
}

AdcReading adc_read(const AdcModel& a, double volts) {
  AdcReading r;
  double v = volts;
  if (!(v >= 0.0)) {  // also catches NaN
    v = 0.0;
    r.clamped = true;
  } else if (v > a.vref) {
    v = a.vref;
    r.clamped = true;
  }
  const double scaled = v / a.vref * static_cast<double>(a.full_scale());
  // std::round rounds halfway cases away from zero on every platform.
  r.code = static_cast<std::uint32_t>(std::round(scaled));
  return r;
}

double adc_voltage(const AdcModel& a, std::uint32_t code) {
  return static_cast<double>(code) / static_cast<double>(a.full_scale()) * a.vref;
}

double divider_voltage(const AdcModel& a, double r_sense, double source) {
  if (!(r_sense >= 0.0)) fail(ErrorCode::NonPositive, "sense resistance must be >= 0");
  return source * r_sense / (r_sense + a.divider_fixed_resistor);
}

DividerReading divider_resistance(const AdcModel& a, std::uint32_t code, double source) {
  DividerReading r;
  const double v = adc_voltage(a, code);
  if (v >= source) {
    r.resistance = std::numeric_limits<double>::infinity();
    r.saturated = true;
    return r;
  }
  r.resistance = a.divider_fixed_resistor * v / (source - v);
  return r;
}

TimeSeries hysteresis_envelope(const TempSensorModel& m, const TimeSeries& trajectory_c) {
  std::vector<Sample> out;
  out.reserve(trajectory_c.size());
  const auto samples = trajectory_c.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = temp_to_resistance(m, samples[i].value);
    double offset = 0.0;
    if (i > 0) {
      const double dtemp = samples[i].value - samples[i - 1].value;
      if (dtemp > 0.0) offset = -m.hysteresis_band * r;
      if (dtemp < 0.0) offset = m.hysteresis_band * r;
    }
    out.push_back({samples[i].t, r + offset});
  }
  return TimeSeries(trajectory_c.channel() + "_resistance", Unit::Ohm, std::move(out));
}

}  // namespace planta::transducers
