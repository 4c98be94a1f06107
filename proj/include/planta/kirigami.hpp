#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "planta/calibration.hpp"
#include "planta/time_series.hpp"

namespace planta::kirigami {

/// Piecewise-linear gauge map. Below the knee the relative resistance change
/// grows at gf_low per unit strain, above it at gf_high (the high-strain gauge
/// factor is read as an incremental slope, which keeps the map continuous).
struct GaugeModel {
  double gf_low = 1.5;
  double gf_high = 0.6;
  double knee_strain = 0.5;  // assumed breakpoint
  double max_strain = 2.5;
  double r_baseline = 10e3;  // ohm, unstrained resistance

  void validate() const;
  double max_rel_resistance() const;
};

struct StemGeometry {
  double arc_length = 0.021;          // m, sensor length along the stem surface
  double sensor_thickness = 205e-6;   // m, substrate plus gel
  double curvature_angle = 0.0;       // deg, 0 when unset
  double curvature_radius = 0.0;      // m, 0 when unset
  double bending_radius = 0.0;        // m, 0 when unset

  void validate() const;
};

double strain_to_rel_resistance(const GaugeModel& g, double strain);
double rel_resistance_to_strain(const GaugeModel& g, double rel_resistance);

/// eps = t / (2 r_b). An infinite radius (flat film) gives zero strain.
double bending_strain(double thickness, double bending_radius);

/// r = 360 S / (2 pi theta), theta in degrees.
double curvature_radius(double arc_length, double angle_deg);

/// Inverse of curvature_radius: the angle an arc of length S subtends on a
/// circle of the given radius.
double wrap_angle(double arc_length, double radius);

/// Stem geometry implied by a diameter: wrap angle, radii. The angle route
/// (r = 360 S / 2 pi theta) and the bending route (r_b = t / 2 eps) describe
/// the same wrap, so either can be recovered from the other.
StemGeometry geometry_for_diameter(const StemGeometry& base, double diameter);

/// Bending calibration (relative resistance vs bending strain) sampled from
/// the gauge model over [strain_lo, strain_hi]; policy error.
CalibrationTable default_bend_curve(const GaugeModel& g, double strain_lo = 0.005,
                                    double strain_hi = 0.1, std::size_t knots = 20);

/// Relative resistance -> bending strain (via the bend curve) -> bending
/// radius -> diameter = 2 r_b = t / eps. Strictly decreasing in the reading.
double diameter_from_reading(const StemGeometry& geo, const CalibrationTable& bend_curve,
                             double rel_resistance);
double diameter_from_reading(const GaugeModel& g, const StemGeometry& geo, double rel_resistance);

/// Forward direction of diameter_from_reading.
double reading_from_diameter(const StemGeometry& geo, const CalibrationTable& bend_curve,
                             double diameter);

// --- disturbance handling -------------------------------------------------

struct BaselineConfig {
  std::size_t window = 60;          // samples in the rolling baseline
  double k_mad = 5.0;               // threshold in robust standard deviations
  double max_pulse_duration = 120;  // s; longer excursions re-anchor the baseline
  double noise_floor = 1e-4;        // minimum threshold, rel. resistance units
};

enum class EventType { Disturbance, Shift };

std::string_view to_string(EventType type);

struct BaselineEvent {
  double onset = 0.0;
  double duration = 0.0;
  EventType type = EventType::Disturbance;
};

struct BaselineResult {
  TimeSeries corrected;
  std::vector<BaselineEvent> disturbances;  // short excursions, replaced
  std::vector<BaselineEvent> shifts;        // long excursions, accepted
};

/// Rolling robust baseline with short-excursion rejection.
///
/// The baseline is a median-based line (median level, median pairwise slope)
/// fitted to the last `window` accepted samples. A sample further than
/// max(k_mad * 1.4826 * MAD, noise_floor) from it opens an excursion. If the
/// signal comes back within max_pulse_duration the excursion is a
/// disturbance and its samples are replaced by the baseline prediction; if
/// it persists, the excursion samples become the new baseline (growth or a
/// genuine shift) and are left untouched. Samples outside excursions pass
/// through unchanged. An excursion still open at the end of the series is
/// left as measured. The first `window` samples seed the baseline and are
/// not screened.
BaselineResult baseline_correct(const TimeSeries& series, const BaselineConfig& cfg = {});

/// `onset,duration,type`
std::string baseline_events_to_csv(const BaselineResult& result);

enum class DisturbanceShape { Step, Pulse };

struct DisturbanceEvent {
  double onset = 0.0;     // s
  double duration = 1.0;  // s; for a step, how long to keep observing
  double magnitude = 0.0; // relative resistance change of the bare response
  DisturbanceShape shape = DisturbanceShape::Pulse;
};

/// First-order response parameters. The flat sensor follows the event with
/// its own response time; the kirigami sensor sees an attenuated, slower
/// version of the same event.
struct DisturbanceResponse {
  double sample_period = 1e-3;        // s
  double flat_time_constant = 7e-3;   // s
  double kirigami_attenuation = 0.5;  // peak ratio kirigami / flat
  double kirigami_rise_multiplier = 2.0;
  double tail_time_constants = 10.0;  // observation after the event ends
};

TimeSeries simulate_disturbance(bool kirigami, const DisturbanceEvent& ev,
                                const DisturbanceResponse& response = {});

}  // namespace planta::kirigami
