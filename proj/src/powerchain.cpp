#include "planta/powerchain.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "planta/csv.hpp"
#include "planta/error.hpp"

namespace planta::power {

void PowerChainConfig::validate() const {
  if (!(capacitance > 0.0)) fail(ErrorCode::NonPositive, "capacitance must be > 0");
  if (!(brownout_voltage > 0.0 && brownout_voltage < wake_voltage)) {
    fail(ErrorCode::InvalidArgument, "need 0 < brownout_voltage < wake_voltage");
  }
  if (!(timestep > 0.0)) fail(ErrorCode::NonPositive, "timestep must be > 0");
  if (!(converter_efficiency > 0.0 && converter_efficiency <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "converter efficiency must be in (0, 1]");
  }
  if (!(reading_latency > 0.0)) fail(ErrorCode::NonPositive, "reading latency must be > 0");
  if (!(active_current >= 0.0) || !(sleep_current >= 0.0) || !(sleep_linger >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "currents and linger time must be >= 0");
  }
  if (!(initial_voltage >= 0.0 && initial_voltage <= wake_voltage)) {
    fail(ErrorCode::InvalidArgument, "initial voltage must be within [0, wake_voltage]");
  }
}

PowerChainState initial_state(const PowerChainConfig& cfg) {
  cfg.validate();
  PowerChainState s;
  s.cap_voltage = cfg.initial_voltage;
  return s;
}

namespace {

void begin_episode(PowerChainState& s) {
  s.mode = Mode::Active;
  s.episode_start = s.time;
  s.episode_elapsed = 0.0;
  s.episode_energy = 0.0;
  s.episode_start_voltage = s.cap_voltage;
  s.reading_done = false;
}

ReadingEvent end_episode(PowerChainState& s) {
  ReadingEvent ev;
  ev.start_time = s.episode_start;
  ev.completed = s.reading_done;
  ev.energy_used = s.episode_energy;
  ev.start_voltage = s.episode_start_voltage;
  ev.end_voltage = s.cap_voltage;
  s.mode = Mode::Charging;
  s.episode_elapsed = 0.0;
  s.episode_energy = 0.0;
  s.reading_done = false;
  return ev;
}

}  // namespace

StepOutcome step(const PowerChainConfig& cfg, const PowerChainState& state, double harvest_power,
                 double dt) {
  if (!(harvest_power >= 0.0) || !std::isfinite(harvest_power)) {
    fail(ErrorCode::InvalidArgument, "harvest power must be finite and >= 0");
  }
  if (!(dt > 0.0)) fail(ErrorCode::NonPositive, "step length must be > 0");

  StepOutcome out{state, {}};
  PowerChainState& s = out.state;
  const double t_end = state.time + dt;
  const double c = cfg.capacitance;
  const double e_wake = cfg.wake_energy();
  double remaining = dt;
  s.energy_offered += harvest_power * dt;

  // Each pass consumes time or changes mode; the bound only trips on a bug.
  for (int guard = 0; remaining > 0.0; ++guard) {
    if (guard > 10'000'000) fail(ErrorCode::InvariantViolation, "power chain step did not advance");

    if (s.mode == Mode::Charging) {
      const double e = cfg.stored_energy(s.cap_voltage);
      if (e >= e_wake) {
        s.cap_voltage = std::min(s.cap_voltage, cfg.wake_voltage);
        begin_episode(s);
        continue;
      }
      if (harvest_power <= 0.0) break;
      const double rate = cfg.converter_efficiency * harvest_power;
      const double t_fill = (e_wake - e) / rate;
      if (t_fill <= remaining) {
        s.energy_harvested += harvest_power * t_fill;
        s.cap_voltage = cfg.wake_voltage;
        s.time += t_fill;
        remaining -= t_fill;
        begin_episode(s);
      } else {
        s.energy_harvested += harvest_power * remaining;
        s.cap_voltage = std::sqrt(2.0 * (e + rate * remaining) / c);
        s.time += remaining;
        remaining = 0.0;
      }
      continue;
    }

    // Active: either the reading itself or the optional sleep linger.
    const bool in_reading = !s.reading_done;
    const double phase_left = in_reading
                                  ? cfg.reading_latency - s.episode_elapsed
                                  : cfg.reading_latency + cfg.sleep_linger - s.episode_elapsed;
    const double current = in_reading ? cfg.active_current : cfg.sleep_current;
    double span = std::min(remaining, phase_left);
    bool brownout = false;
    if (current > 0.0) {
      const double t_brownout = std::max(0.0, (s.cap_voltage - cfg.brownout_voltage) * c / current);
      if (t_brownout < span) {
        span = t_brownout;
        brownout = true;
      }
    }
    const double v0 = s.cap_voltage;
    const double v1 = brownout ? cfg.brownout_voltage : v0 - current * span / c;
    const double used = cfg.stored_energy(v0) - cfg.stored_energy(v1);
    s.cap_voltage = v1;
    s.energy_delivered += used;
    s.episode_energy += used;
    s.episode_elapsed += span;
    s.time += span;
    remaining -= span;

    if (brownout) {
      out.events.push_back(end_episode(s));
    } else if (span == phase_left) {
      if (in_reading) {
        s.reading_done = true;
        ++s.readings_taken;
        if (cfg.sleep_linger <= 0.0) out.events.push_back(end_episode(s));
      } else {
        out.events.push_back(end_episode(s));
      }
    }
  }
  s.time = t_end;
  return out;
}

std::size_t SimulationResult::completed_readings() const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [](const ReadingEvent& e) { return e.completed; }));
}

double SimulationResult::ledger_residual(const PowerChainConfig& cfg) const {
  const double stored = cfg.stored_energy(final_state.cap_voltage) - initial_energy;
  return cfg.converter_efficiency * final_state.energy_harvested - stored -
         final_state.energy_delivered;
}

namespace {

double sample_hold(const TimeSeries& profile, std::size_t& cursor, double t) {
  const auto samples = profile.samples();
  while (cursor + 1 < samples.size() && samples[cursor + 1].t <= t) ++cursor;
  return samples[cursor].value;
}

}  // namespace

SimulationResult simulate(const PowerChainConfig& cfg, const TimeSeries& harvest_profile,
                          double duration) {
  cfg.validate();
  if (harvest_profile.empty()) {
    fail(ErrorCode::InsufficientData, "harvest profile has no samples");
  }
  if (!(duration >= 0.0)) fail(ErrorCode::InvalidArgument, "duration must be >= 0");

  SimulationResult result;
  PowerChainState s = initial_state(cfg);
  result.initial_energy = cfg.stored_energy(s.cap_voltage);
  const auto steps = static_cast<std::size_t>(std::ceil(duration / cfg.timestep - 1e-9));
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * cfg.timestep;
    const double dt = std::min(cfg.timestep, duration - t0);
    if (!(dt > 0.0)) break;
    s.time = t0;
    const double p = sample_hold(harvest_profile, cursor, t0);
    auto outcome = step(cfg, s, p, dt);
    s = outcome.state;
    for (auto& ev : outcome.events) result.events.push_back(std::move(ev));
  }
  s.time = duration;
  result.final_state = s;
  return result;
}

SimulationResult simulate_constant(const PowerChainConfig& cfg, double harvest_power,
                                   double duration) {
  return simulate(cfg, TimeSeries("harvest", Unit::Watt, {{0.0, harvest_power}}), duration);
}

double min_power_for_readings(const PowerChainConfig& cfg, std::size_t readings, double horizon,
                              double tolerance) {
  cfg.validate();
  if (readings == 0) return 0.0;
  if (static_cast<double>(readings) * cfg.reading_latency > horizon) {
    fail(ErrorCode::Infeasible,
         fmt::format("{} readings of {} s latency do not fit in {} s", readings,
                     cfg.reading_latency, horizon));
  }
  auto enough = [&](double p) {
    return simulate_constant(cfg, p, horizon).completed_readings() >= readings;
  };
  double lo = 0.0;
  double hi = 1e-6;
  while (!enough(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      fail(ErrorCode::Infeasible,
           fmt::format("{} readings not reachable within {} s at any harvest power", readings,
                       horizon));
    }
  }
  while (hi - lo > tolerance) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    (enough(mid) ? hi : lo) = mid;
  }
  return hi;
}

DayNightCount count_day_night(const std::vector<ReadingEvent>& events, double sunrise_hour,
                              double sunset_hour) {
  DayNightCount out;
  for (const auto& ev : events) {
    if (!ev.completed) continue;
    const double hour = std::fmod(ev.start_time, kSecondsPerDay) / 3600.0;
    if (hour >= sunrise_hour && hour < sunset_hour) {
      ++out.day;
    } else {
      ++out.night;
    }
  }
  return out;
}

TimeSeries read_harvest_profile(const std::string& path) {
  auto series = read_series_csv(path, Unit::Watt, "power_watts");
  for (const auto& s : series.samples()) {
    if (s.value < 0.0) fail(ErrorCode::InvariantViolation, path + ": negative harvest power");
  }
  return series;
}

std::string event_log_to_csv(const std::vector<ReadingEvent>& events) {
  std::string out = "start_time,completed,energy_used_joules\n";
  for (const auto& ev : events) {
    out += fmt::format("{},{},{}\n", format_number(ev.start_time), ev.completed ? "true" : "false",
                       format_number(ev.energy_used));
  }
  return out;
}

}  // namespace planta::power
