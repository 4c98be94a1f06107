#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "planta/time_series.hpp"

namespace planta::power {

// MEG -> boost converter -> capacitor bank -> analog switch -> controller.
//
// The converter is a fixed-efficiency energy pump already sitting at the
// source's maximum power point. While CHARGING it moves eta * P into the
// capacitor. When the bank reaches wake_voltage the switch closes and the
// controller runs one reading: a constant active_current drain for
// reading_latency seconds, optionally followed by sleep_current for
// sleep_linger seconds. Then the switch opens again. Falling to
// brownout_voltage ends the episode early; if the reading itself was cut
// short the event is recorded as not completed.
//
// Constant-current drain has a closed form (dV/dt = -I/C), and so does the
// charge phase, so each fixed step is split at the exact instants where the
// bank fills, a reading ends or brownout hits. Results then depend on the
// step size only through where the harvest profile is sampled.
struct PowerChainConfig {
  double capacitance = 880e-6;       // F (660 uF || 220 uF)
  double wake_voltage = 3.3;         // V
  double brownout_voltage = 1.8;     // V, assumed MCU floor
  double converter_efficiency = 0.8;
  double sleep_current = 5e-6;       // A, only while the switch is closed
  double active_current = 1e-3;      // A, assumed active draw
  double reading_latency = 0.935;    // s
  double sleep_linger = 0.0;         // s spent asleep on the bank after a reading
  double timestep = 1.0;             // s
  double initial_voltage = 0.0;      // V, pre-charge at installation

  void validate() const;
  double stored_energy(double voltage) const { return 0.5 * capacitance * voltage * voltage; }
  double wake_energy() const { return stored_energy(wake_voltage); }
  /// Energy between wake and brownout.
  double usable_energy() const { return wake_energy() - stored_energy(brownout_voltage); }
};

enum class Mode { Charging, Active };

struct PowerChainState {
  double time = 0.0;
  double cap_voltage = 0.0;
  Mode mode = Mode::Charging;
  std::size_t readings_taken = 0;
  double energy_offered = 0.0;    // J, integral of P over all time
  double energy_harvested = 0.0;  // J, converter-input energy actually accepted
  double energy_delivered = 0.0;  // J, drawn by the controller

  // Active episode bookkeeping; meaningful only in Mode::Active.
  double episode_start = 0.0;
  double episode_elapsed = 0.0;
  double episode_energy = 0.0;
  double episode_start_voltage = 0.0;
  bool reading_done = false;
};

struct ReadingEvent {
  double start_time = 0.0;
  bool completed = false;
  double energy_used = 0.0;  // J
  double start_voltage = 0.0;
  double end_voltage = 0.0;
  /// Channel values captured during the reading; filled in when the power
  /// chain is composed with the transducer models.
  std::map<std::string, double> measurements;
};

struct StepOutcome {
  PowerChainState state;
  std::vector<ReadingEvent> events;  // episodes that ended within the step
};

PowerChainState initial_state(const PowerChainConfig& cfg);

StepOutcome step(const PowerChainConfig& cfg, const PowerChainState& state,
                 double harvest_power, double dt);
inline StepOutcome step(const PowerChainConfig& cfg, const PowerChainState& state,
                        double harvest_power) {
  return step(cfg, state, harvest_power, cfg.timestep);
}

struct SimulationResult {
  std::vector<ReadingEvent> events;
  PowerChainState final_state;
  double initial_energy = 0.0;  // J in the bank at t = 0

  std::size_t completed_readings() const;
  /// eta * harvested - (delta stored + delivered); zero up to rounding.
  double ledger_residual(const PowerChainConfig& cfg) const;
};

/// Fixed-step replay. The harvest profile is sampled zero-order-hold at the
/// start of each step, holding the first/last value outside its span.
SimulationResult simulate(const PowerChainConfig& cfg, const TimeSeries& harvest_profile,
                          double duration);
SimulationResult simulate_constant(const PowerChainConfig& cfg, double harvest_power,
                                   double duration);

/// Smallest constant harvest power giving at least `readings` completed
/// readings within `horizon`, found by bisection to `tolerance` watts.
/// Throws Infeasible when the readings cannot fit in the horizon.
double min_power_for_readings(const PowerChainConfig& cfg, std::size_t readings,
                              double horizon, double tolerance = 1e-12);

struct DayNightCount {
  std::size_t day = 0;
  std::size_t night = 0;
};

/// Splits completed readings by local time of day; day is [sunrise, sunset).
DayNightCount count_day_night(const std::vector<ReadingEvent>& events, double sunrise_hour = 6.0,
                              double sunset_hour = 18.0);

/// `t_seconds,power_watts`
TimeSeries read_harvest_profile(const std::string& path);

/// `start_time,completed,energy_used_joules`
std::string event_log_to_csv(const std::vector<ReadingEvent>& events);

}  // namespace planta::power
