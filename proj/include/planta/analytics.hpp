#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "planta/time_series.hpp"

namespace planta::analytics {

struct VpdInputs {
  double leaf_temp = 0.0;  // degC, beneath the leaf
  double air_temp = 0.0;   // degC, open air
  double air_rh = 0.0;     // %RH, open air
};

struct VpdResult {
  double vp_sat = 0.0;  // kPa
  double vp_air = 0.0;  // kPa
  double vpd = 0.0;     // kPa
  bool negative = false;
};

/// 0.6107 * 10^(7.5 T / (237.3 + T)) kPa. Constants are fixed.
double saturation_vapor_pressure(double temp_c);

/// Throws SanityRange for temperatures outside [-20, 60] degC or RH outside
/// [0, 100].
VpdResult vapor_pressures(const VpdInputs& inp);

enum class StressClass { Healthy, WaterStress, SalinityStress, Indeterminate };

std::string_view to_string(StressClass label);
StressClass parse_stress_class(std::string_view text);

struct StressLabel {
  StressClass label = StressClass::Indeterminate;
  double vpd_slope = 0.0;       // kPa/day
  double diameter_slope = 0.0;  // mm/day
};

struct ClassifierConfig {
  double vpd_window = 3.0 * 86400.0;       // s
  double diameter_window = 7.0 * 86400.0;  // s
  double tau_vpd = 0.02;                   // kPa/day
  double tau_diameter = 0.003;             // mm/day
};

/// Rule table on the two trailing slopes.
StressClass classify_slopes(double vpd_slope, double diameter_slope, const ClassifierConfig& cfg);

/// VPD series in kPa; diameter series in any length unit (slopes are
/// reported in mm/day). Throws InsufficientData when a window holds fewer
/// than two samples.
StressLabel classify_stress(const TimeSeries& vpd, const TimeSeries& diameter,
                            const ClassifierConfig& cfg = {});

/// One sample per calendar day (floor(t / 86400)), placed at the day's
/// midpoint, holding the mean of that day's samples.
TimeSeries daily_means(const TimeSeries& series);

struct LagConfig {
  double max_lag = 8.0 * 3600.0;      // s
  double equal_tol = 1.0;             // %RH
  std::optional<double> watering_time;  // s; defaults to the first common sample
  std::size_t sustain_samples = 3;
  std::size_t min_overlap = 10;       // samples
};

struct LagResult {
  double lag = 0.0;                // s, positive when upper trails lower
  double correlation = 0.0;        // at the chosen lag
  double equalization_time = 0.0;  // s after the watering marker
  double sample_period = 0.0;      // s
};

/// Lag maximising the normalised cross-correlation over [0, max_lag], with a
/// linear trend removed from each overlapping segment. Both series are put on
/// a common uniform grid (the lower series' median spacing) by linear
/// interpolation. Ties go to the smaller lag.
LagResult estimate_lag(const TimeSeries& lower, const TimeSeries& upper, const LagConfig& cfg = {});

/// estimate_lag plus the equalization time: the first instant after the
/// series have diverged (post-marker) at which |lower - upper| <= equal_tol
/// holds for sustain_samples consecutive samples. Throws NoEqualization.
LagResult translocation_lag(const TimeSeries& lower, const TimeSeries& upper,
                            const LagConfig& cfg = {});

/// Series resistance plus one parallel R-C branch.
struct ImpedanceCircuit {
  double r_series = 0.0;  // ohm
  double r_ct = 0.0;      // ohm
  double c_dl = 0.0;      // F

  void validate() const;
};

/// Z(f) = R_s + R_ct / (1 + j 2 pi f R_ct C_dl). f may be +infinity.
std::complex<double> impedance(const ImpedanceCircuit& circuit, double frequency_hz);

/// Z = V_AC / I_AC. Throws ZeroCurrent.
double measured_impedance(double v_ac, double i_ac);

std::vector<double> log_frequency_grid(double f_lo, double f_hi, std::size_t points);

}  // namespace planta::analytics
