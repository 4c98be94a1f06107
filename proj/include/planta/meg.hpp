#pragma once

#include <optional>
#include <span>

#include "planta/calibration.hpp"

namespace planta::meg {

/// Synthesized open-circuit voltage table: V = 4.2 mV/%RH * RH sampled at
/// 30..90 %RH, clamped outside. Not digitized from measurements.
CalibrationTable default_voc_table();

/// Area of the 5 mm diameter membrane disc, m^2.
double default_active_area();

struct MegConfig {
  CalibrationTable voc_vs_rh = default_voc_table();
  double internal_resistance = 20.0;  // ohm, from the matched-load power peak
  double membrane_thickness = 0.0;    // m; only read when thickness_gain is set
  /// Dimensionless gain vs membrane thickness, non-decreasing and normalised
  /// to 1 at the saturation knee (last knot, clamped beyond). Unset means 1.
  std::optional<CalibrationTable> thickness_gain;
  double active_area = default_active_area();  // m^2
  double converter_efficiency = 1.0;           // used by delivered_power only

  void validate() const;
};

struct LoadPoint {
  double load_resistance = 0.0;  // ohm
  double voltage = 0.0;          // V
  double current = 0.0;          // A
  double power = 0.0;            // W
};

struct MaxPowerPoint {
  double load_resistance = 0.0;
  double power = 0.0;
};

struct EfficiencyInputs {
  double output_energy = 0.0;          // J
  double evaporated_mass = 0.0;        // g
  double molar_mass_water = 18.015;    // g/mol
  double heat_of_evaporation = 44000;  // J/mol
};

struct EfficiencyResult {
  double input_energy = 0.0;  // J
  double efficiency = 0.0;    // fraction
};

double thickness_gain(const MegConfig& cfg);

/// Open-circuit voltage at the given humidity, thickness gain applied.
/// RH outside [0, 100] is rejected; inside, the table's policy governs the
/// region outside its calibrated span.
double open_circuit_voltage(const MegConfig& cfg, double rh_pct);

/// Thevenin division. `load` may be +infinity (open circuit).
LoadPoint thevenin_point(double voc, double r_int, double load);
LoadPoint operating_point(const MegConfig& cfg, double rh_pct, double load);

/// Grid point with the highest delivered power; ties go to the smaller
/// resistance. Throws EmptyGrid for an empty grid, NonPositive for a
/// non-positive entry.
MaxPowerPoint find_mpp(double voc, double r_int, std::span<const double> load_grid);
MaxPowerPoint find_mpp(const MegConfig& cfg, double rh_pct, std::span<const double> load_grid);

/// Power at the matched load, Voc^2 / (4 R_int), times converter_efficiency.
double delivered_power(const MegConfig& cfg, double rh_pct);

/// W/m^2.
double power_density(double power, const MegConfig& cfg);
inline double to_microwatt_per_cm2(double watt_per_m2) { return watt_per_m2 * 100.0; }

EfficiencyResult evaporation_efficiency(const EfficiencyInputs& inp);

}  // namespace planta::meg
