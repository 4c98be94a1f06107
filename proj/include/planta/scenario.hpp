#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "planta/analytics.hpp"
#include "planta/config.hpp"
#include "planta/kirigami.hpp"
#include "planta/meg.hpp"
#include "planta/powerchain.hpp"
#include "planta/time_series.hpp"
#include "planta/transducers.hpp"

namespace planta::scenario {

enum class PlantCondition { Healthy, WaterStress, SalinityStress };

std::string_view to_string(PlantCondition c);
PlantCondition parse_condition(std::string_view text);

struct Climate {
  double air_temp_mean = 25.0;       // degC
  double air_temp_amplitude = 5.0;   // degC
  double air_rh_mean = 55.0;         // %RH
  double air_rh_amplitude = 15.0;    // %RH, anti-phase with temperature
  double peak_hour = 14.0;           // h, warmest time of day
};

/// A virtual plant. Condition-dependent fields left unset (NaN or empty)
/// take the defaults of that condition.
struct PlantScenario {
  double duration_days = 40.0;
  PlantCondition condition = PlantCondition::Healthy;
  Climate climate;
  double leaf_temp_offset = -1.5;   // degC, leaf cooler than air
  double leaf_rh_offset = 8.0;      // %RH, under-leaf more humid
  double leaf_temp_drift = NAN;     // degC/day
  double air_rh_drift = NAN;        // %RH/day
  double initial_diameter = NAN;    // mm
  double diameter_slope = NAN;      // mm/day
  double truth_step = 600.0;        // s
  double temp_noise = 0.0;          // degC, sensor noise sigma
  double rh_noise = 0.0;            // %RH
  double strain_noise = 0.0;        // relative resistance
  double watering_hour = NAN;       // h of day; negative disables
  double dosing_hour = NAN;         // h of day; negative disables
  std::uint64_t seed = 0;

  /// Copy with every condition default filled in. Throws InvalidArgument when
  /// the diameter trajectory would leave (3, 15) mm.
  PlantScenario resolved() const;
  double duration() const { return duration_days * 86400.0; }
};

struct Truth {
  TimeSeries leaf_temp;  // degC
  TimeSeries air_temp;   // degC
  TimeSeries air_rh;     // %RH
  TimeSeries leaf_rh;    // %RH
  TimeSeries diameter;   // mm
  TimeSeries vpd;        // kPa
};

struct TruthPoint {
  double leaf_temp = 0.0;
  double air_temp = 0.0;
  double air_rh = 0.0;
  double leaf_rh = 0.0;
  double diameter = 0.0;  // mm
};

/// Noise-free plant state at time t (scenario must be resolved).
TruthPoint truth_at(const PlantScenario& s, double t);

/// Truth channels on the [0, duration) grid with the scenario's step.
Truth generate(const PlantScenario& scenario);

enum class PowerSource { Constant, Meg };

std::string_view to_string(PowerSource s);

struct PipelineConfig {
  power::PowerChainConfig power;
  PowerSource source = PowerSource::Constant;
  double constant_power = 2.5e-7;  // W
  double meg_power_scale = 1.0;    // multiplies the MEG maximum power
  meg::MegConfig meg;
  transducers::TempSensorModel temp_sensor;
  transducers::HumiditySensorModel humidity_sensor;
  transducers::AdcModel adc;
  int reference_bits = 24;  // bench logger on external power
  kirigami::GaugeModel gauge;
  kirigami::StemGeometry geometry;
  CalibrationTable bend_curve = kirigami::default_bend_curve(kirigami::GaugeModel{});
  analytics::ClassifierConfig classifier;
  double sunrise_hour = 6.0;
  double sunset_hour = 18.0;
};

/// One pass of the sensing chain: truth -> transducers -> ADC -> inverse.
struct Reading {
  double t = 0.0;
  bool ok = false;
  std::string status;  // "ok" or the error code that rejected it
  std::uint32_t leaf_temp_code = 0;
  std::uint32_t air_temp_code = 0;
  std::uint32_t air_rh_code = 0;
  std::uint32_t leaf_rh_code = 0;
  std::uint32_t strain_code = 0;
  double leaf_temp = 0.0;  // degC
  double air_temp = 0.0;   // degC
  double air_rh = 0.0;     // %RH
  double leaf_rh = 0.0;    // %RH
  double diameter = 0.0;   // mm
  analytics::VpdResult vpd;
};

struct DailyLabel {
  int day = 0;  // 1-based; the label uses data up to the end of this day
  analytics::StressLabel label;
};

struct Marker {
  double t = 0.0;
  std::string kind;
};

struct RunOutput {
  PlantScenario scenario;  // resolved
  Truth truth;
  power::SimulationResult power;
  std::vector<Reading> readings;   // self-powered, one per completed event
  std::vector<Reading> reference;  // externally powered, truth grid
  TimeSeries vpd;                  // kPa, accepted self-powered readings
  TimeSeries diameter;             // mm, accepted self-powered readings
  TimeSeries reference_vpd;        // kPa
  TimeSeries reference_diameter;   // mm
  std::vector<DailyLabel> labels;
  std::vector<Marker> markers;
  std::size_t rejected_readings = 0;
};

/// Reads one instant through the sensing chain. `adc` sets the resolution;
/// noise draws are keyed by (stream_tag, index).
Reading sense(const PlantScenario& s, const PipelineConfig& cfg,
              const transducers::AdcModel& adc, double t, std::string_view stream_tag,
              std::uint64_t index);

RunOutput end_to_end(const PlantScenario& scenario, const PipelineConfig& cfg = {});

struct ScenarioFile {
  PlantScenario scenario;
  PipelineConfig pipeline;
};

/// Builds a scenario from a config file. Unknown keys are errors. Relative
/// calibration paths resolve against the file's directory.
ScenarioFile load_scenario(const Config& config);

/// `[power]` keys (capacitance_f, wake_voltage_v, ...) over the given defaults.
void read_power_section(const Config& config, power::PowerChainConfig& cfg);
/// `[meg]` keys (internal_resistance_ohm, voc_table, ...) over the given
/// defaults.
void read_meg_section(const Config& config, meg::MegConfig& cfg);

nlohmann::json run_report(const RunOutput& out, const PipelineConfig& cfg);

/// Writes truth.csv, readings.csv, reference.csv, events.csv, vpd_report.csv,
/// diameter.csv, labels.csv, markers.csv and report.json into `dir`, each
/// atomically. Returns the report.
nlohmann::json write_run(const RunOutput& out, const PipelineConfig& cfg,
                         const std::filesystem::path& dir);

}  // namespace planta::scenario
