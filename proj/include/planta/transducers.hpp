#pragma once

#include <cstdint>

#include "planta/calibration.hpp"
#include "planta/time_series.hpp"

namespace planta::transducers {

/// Linear NTC resistor: R = r0 * (1 + alpha * (T - t_ref)).
struct TempSensorModel {
  double r0 = 10e3;            // ohm at t_ref; only relative change matters
  double t_ref = 25.0;         // degC
  double alpha = -0.0102;      // 1/degC
  double range_low = 15.0;     // degC
  double range_high = 60.0;    // degC
  double hysteresis_band = 0.0005;

  void validate() const;
};

/// Default MEG humidity curve: V = 4.2 mV/%RH * RH over 0..100 %RH,
/// policy error. Synthesized from the stated sensitivity.
CalibrationTable default_humidity_curve();

struct HumiditySensorModel {
  CalibrationTable curve = default_humidity_curve();
  double temp_correction = 0.0;  // %RH per degC relative to t_reference
  double t_reference = 25.0;     // degC

  void validate() const;
};

struct AdcModel {
  int bits = 12;
  double vref = 3.3;                     // V
  double divider_fixed_resistor = 10e3;  // ohm, high side of the divider

  void validate() const;
  std::uint32_t full_scale() const { return (std::uint32_t{1} << bits) - 1u; }
  /// Volts per code step.
  double lsb() const { return vref / static_cast<double>(full_scale()); }
};

double temp_to_resistance(const TempSensorModel& m, double t_c);
double resistance_to_temp(const TempSensorModel& m, double r_ohm);

struct HumidityReading {
  double rh = 0.0;       // corrected and clamped to [0, 100]
  double raw_rh = 0.0;   // straight curve inversion
  double corrected_rh = 0.0;  // before clamping
  bool clamped = false;
};

HumidityReading rh_from_meg_voltage(const HumiditySensorModel& m, double volts, double leaf_temp_c);
/// Forward direction, used by simulators.
double meg_voltage_from_rh(const HumiditySensorModel& m, double rh_pct);

struct AdcReading {
  std::uint32_t code = 0;
  bool clamped = false;
};

/// code = round(v / vref * (2^bits - 1)), ties away from zero; inputs
/// outside [0, vref] are clamped and flagged.
AdcReading adc_read(const AdcModel& a, double volts);
double adc_voltage(const AdcModel& a, std::uint32_t code);

/// Voltage across the sensing resistor when it sits on the low side of the
/// divider fed from `source`.
double divider_voltage(const AdcModel& a, double r_sense, double source);

struct DividerReading {
  double resistance = 0.0;  // ohm; +inf when the sense node sits at the source
  bool saturated = false;
};

/// R_sense = R_fixed * v / (source - v) with v reconstructed from the code.
DividerReading divider_resistance(const AdcModel& a, std::uint32_t code, double source);

/// Band model of the temperature sensor's hysteresis: while temperature
/// rises the output sits hysteresis_band * R below the linear curve, while it
/// falls it sits the same amount above, and it returns to the curve as soon
/// as the temperature holds still.
TimeSeries hysteresis_envelope(const TempSensorModel& m, const TimeSeries& trajectory_c);

}  // namespace planta::transducers
