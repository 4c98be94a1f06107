#include "planta/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "planta/csv.hpp"
#include "planta/error.hpp"
#include "planta/report.hpp"
#include "planta/rng.hpp"
#include "planta/stats.hpp"

namespace planta::scenario {

std::string_view to_string(PlantCondition c) {
  switch (c) {
    case PlantCondition::Healthy: return "HEALTHY";
    case PlantCondition::WaterStress: return "WATER_STRESS";
    case PlantCondition::SalinityStress: return "SALINITY_STRESS";
  }
  return "HEALTHY";
}

PlantCondition parse_condition(std::string_view text) {
  for (auto c : {PlantCondition::Healthy, PlantCondition::WaterStress,
                 PlantCondition::SalinityStress}) {
    if (to_string(c) == text) return c;
  }
  fail(ErrorCode::ParseError, fmt::format("unknown condition '{}' (HEALTHY, WATER_STRESS, "
                                          "SALINITY_STRESS)", text));
}

std::string_view to_string(PowerSource s) { return s == PowerSource::Constant ? "constant" : "meg"; }

namespace {

struct ConditionDefaults {
  double initial_diameter;  // mm
  double diameter_slope;    // mm/day
  double leaf_temp_drift;   // degC/day
  double air_rh_drift;      // %RH/day
  double watering_hour;
  double dosing_hour;
};

// Diameters follow the pristine columns of the shipped stem table (day-1 value, endpoint
// slope). Drifts give a rising VPD under drought (warming leaf, drying air)
// and a falling one under salinity.
ConditionDefaults defaults_for(PlantCondition c) {
  switch (c) {
    case PlantCondition::Healthy: return {6.43, 0.0095, 0.0, 0.0, 12.5, -1.0};
    case PlantCondition::WaterStress: return {6.87, -0.0103, 0.25, -0.25, -1.0, -1.0};
    case PlantCondition::SalinityStress: return {6.52, -0.0095, -0.05, 0.6, 12.5, 9.0};
  }
  return {6.43, 0.0095, 0.0, 0.0, 12.5, -1.0};
}

void fill(double& field, double fallback) {
  if (std::isnan(field)) field = fallback;
}

}  // namespace

PlantScenario PlantScenario::resolved() const {
  PlantScenario s = *this;
  const auto d = defaults_for(condition);
  fill(s.initial_diameter, d.initial_diameter);
  fill(s.diameter_slope, d.diameter_slope);
  fill(s.leaf_temp_drift, d.leaf_temp_drift);
  fill(s.air_rh_drift, d.air_rh_drift);
  fill(s.watering_hour, d.watering_hour);
  fill(s.dosing_hour, d.dosing_hour);

  if (!(s.duration_days >= 0.0) || !std::isfinite(s.duration_days)) {
    fail(ErrorCode::InvalidArgument, "duration_days must be >= 0");
  }
  if (!(s.truth_step > 0.0)) fail(ErrorCode::InvalidArgument, "truth step must be > 0");
  if (!(s.temp_noise >= 0.0 && s.rh_noise >= 0.0 && s.strain_noise >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "noise sigmas must be >= 0");
  }
  if (!(s.climate.air_temp_amplitude >= 0.0 && s.climate.air_rh_amplitude >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "diurnal amplitudes must be >= 0");
  }
  const double d_end = s.initial_diameter + s.diameter_slope * s.duration_days;
  for (double dia : {s.initial_diameter, d_end}) {
    if (!(dia > 3.0 && dia < 15.0)) {
      fail(ErrorCode::InvalidArgument,
           fmt::format("diameter trajectory reaches {} mm, outside (3, 15)", dia));
    }
  }
  return s;
}

TruthPoint truth_at(const PlantScenario& s, double t) {
  const double days = t / kSecondsPerDay;
  const double c = std::cos(2.0 * std::numbers::pi * (days - s.climate.peak_hour / 24.0));
  TruthPoint p;
  p.air_temp = s.climate.air_temp_mean + s.climate.air_temp_amplitude * c;
  p.air_rh = std::clamp(
      s.climate.air_rh_mean - s.climate.air_rh_amplitude * c + s.air_rh_drift * days, 0.0, 100.0);
  p.leaf_temp = p.air_temp + s.leaf_temp_offset + s.leaf_temp_drift * days;
  p.leaf_rh = std::clamp(p.air_rh + s.leaf_rh_offset, 0.0, 100.0);
  p.diameter = s.initial_diameter + s.diameter_slope * days;
  return p;
}

Truth generate(const PlantScenario& scenario) {
  const PlantScenario s = scenario.resolved();
  const double duration = s.duration();
  std::vector<Sample> leaf_t, air_t, air_rh, leaf_rh, dia, vpd;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * s.truth_step;
    if (!(t < duration)) break;
    const TruthPoint p = truth_at(s, t);
    leaf_t.push_back({t, p.leaf_temp});
    air_t.push_back({t, p.air_temp});
    air_rh.push_back({t, p.air_rh});
    leaf_rh.push_back({t, p.leaf_rh});
    dia.push_back({t, p.diameter});
    vpd.push_back({t, analytics::vapor_pressures({p.leaf_temp, p.air_temp, p.air_rh}).vpd});
  }
  return Truth{TimeSeries("leaf_temp", Unit::Celsius, std::move(leaf_t)),
               TimeSeries("air_temp", Unit::Celsius, std::move(air_t)),
               TimeSeries("air_rh", Unit::PercentRh, std::move(air_rh)),
               TimeSeries("leaf_rh", Unit::PercentRh, std::move(leaf_rh)),
               TimeSeries("diameter", Unit::Millimeter, std::move(dia)),
               TimeSeries("vpd", Unit::Kilopascal, std::move(vpd))};
}

Reading sense(const PlantScenario& s, const PipelineConfig& cfg,
              const transducers::AdcModel& adc, double t, std::string_view stream_tag,
              std::uint64_t index) {
  namespace tx = transducers;
  const TruthPoint p = truth_at(s, t);
  const CounterRng rng(s.seed);
  auto noise = [&](const char* channel, double sigma) {
    if (sigma == 0.0) return 0.0;
    const std::string name = fmt::format("{}/{}", stream_tag, channel);
    return sigma * rng.normal(stream_id(name.c_str()), index);
  };

  Reading r;
  r.t = t;
  try {
    auto temperature = [&](double t_c, std::uint32_t& code) {
      const double ohm = tx::temp_to_resistance(cfg.temp_sensor, t_c);
      code = tx::adc_read(adc, tx::divider_voltage(adc, ohm, adc.vref)).code;
      const auto back = tx::divider_resistance(adc, code, adc.vref);
      if (back.saturated) fail(ErrorCode::RangeError, "temperature divider saturated");
      return tx::resistance_to_temp(cfg.temp_sensor, back.resistance);
    };
    auto humidity = [&](double rh, double leaf_temp_c, std::uint32_t& code) {
      const double volts = tx::meg_voltage_from_rh(cfg.humidity_sensor, std::clamp(rh, 0.0, 100.0));
      code = tx::adc_read(adc, volts).code;
      // A code can land up to half a step past the curve ends (saturated air).
      const auto& curve = cfg.humidity_sensor.curve;
      const double half = 0.5 * adc.lsb();
      double v = tx::adc_voltage(adc, code);
      if (v > curve.max_response() && v <= curve.max_response() + half) v = curve.max_response();
      if (v < curve.min_response() && v >= curve.min_response() - half) v = curve.min_response();
      return tx::rh_from_meg_voltage(cfg.humidity_sensor, v, leaf_temp_c).rh;
    };

    r.leaf_temp = temperature(p.leaf_temp + noise("leaf_temp", s.temp_noise), r.leaf_temp_code);
    r.air_temp = temperature(p.air_temp + noise("air_temp", s.temp_noise), r.air_temp_code);
    r.air_rh = humidity(p.air_rh + noise("air_rh", s.rh_noise), r.leaf_temp, r.air_rh_code);
    r.leaf_rh = humidity(p.leaf_rh + noise("leaf_rh", s.rh_noise), r.leaf_temp, r.leaf_rh_code);

    const double y = kirigami::reading_from_diameter(cfg.geometry, cfg.bend_curve, p.diameter * 1e-3) +
                     noise("strain", s.strain_noise);
    const double ohm = cfg.gauge.r_baseline * (1.0 + y);
    r.strain_code = tx::adc_read(adc, tx::divider_voltage(adc, ohm, adc.vref)).code;
    const auto back = tx::divider_resistance(adc, r.strain_code, adc.vref);
    if (back.saturated) fail(ErrorCode::RangeError, "strain divider saturated");
    const double y_back = back.resistance / cfg.gauge.r_baseline - 1.0;
    r.diameter = kirigami::diameter_from_reading(cfg.geometry, cfg.bend_curve, y_back) * 1e3;

    r.vpd = analytics::vapor_pressures({r.leaf_temp, r.air_temp, r.air_rh});
    r.ok = true;
    r.status = "ok";
  } catch (const Error& e) {
    r.ok = false;
    r.status = std::string(to_string(e.code()));
  }
  return r;
}

RunOutput end_to_end(const PlantScenario& scenario, const PipelineConfig& cfg) {
  RunOutput out;
  out.scenario = scenario.resolved();
  const PlantScenario& s = out.scenario;
  out.truth = generate(s);
  const double duration = s.duration();

  if (cfg.source == PowerSource::Constant || out.truth.leaf_rh.empty()) {
    const double p = cfg.source == PowerSource::Constant ? cfg.constant_power : 0.0;
    out.power = power::simulate_constant(cfg.power, p, duration);
  } else {
    std::vector<Sample> profile;
    for (const auto& smp : out.truth.leaf_rh.samples()) {
      const double voc = meg::open_circuit_voltage(cfg.meg, smp.value);
      const double r_int = cfg.meg.internal_resistance;
      profile.push_back({smp.t, cfg.meg_power_scale * voc * voc / (4.0 * r_int)});
    }
    out.power = power::simulate(cfg.power, TimeSeries("harvest", Unit::Watt, std::move(profile)),
                                duration);
  }

  std::vector<Sample> vpd, dia;
  std::uint64_t ordinal = 0;
  for (auto& ev : out.power.events) {
    if (!ev.completed) continue;
    Reading r = sense(s, cfg, cfg.adc, ev.start_time, "self", ordinal++);
    ev.measurements["leaf_temp_code"] = r.leaf_temp_code;
    ev.measurements["air_temp_code"] = r.air_temp_code;
    ev.measurements["air_rh_code"] = r.air_rh_code;
    ev.measurements["leaf_rh_code"] = r.leaf_rh_code;
    ev.measurements["strain_code"] = r.strain_code;
    if (r.ok) {
      vpd.push_back({r.t, r.vpd.vpd});
      dia.push_back({r.t, r.diameter});
    } else {
      ++out.rejected_readings;
    }
    out.readings.push_back(std::move(r));
  }
  out.vpd = TimeSeries("vpd", Unit::Kilopascal, std::move(vpd));
  out.diameter = TimeSeries("diameter", Unit::Millimeter, std::move(dia));

  transducers::AdcModel ref_adc = cfg.adc;
  ref_adc.bits = cfg.reference_bits;
  ref_adc.validate();
  std::vector<Sample> ref_vpd, ref_dia;
  const auto grid = out.truth.diameter.times();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Reading r = sense(s, cfg, ref_adc, grid[i], "reference", i);
    if (r.ok) {
      ref_vpd.push_back({r.t, r.vpd.vpd});
      ref_dia.push_back({r.t, r.diameter});
    }
    out.reference.push_back(std::move(r));
  }
  out.reference_vpd = TimeSeries("vpd", Unit::Kilopascal, std::move(ref_vpd));
  out.reference_diameter = TimeSeries("diameter", Unit::Millimeter, std::move(ref_dia));

  // One label per completed day once both trend windows are covered.
  const double need = std::max(cfg.classifier.diameter_window, cfg.classifier.vpd_window);
  const auto full_days = static_cast<int>(std::floor(s.duration_days + 1e-9));
  for (int day = 1; day <= full_days; ++day) {
    const double t_end = day * kSecondsPerDay;
    if (t_end < need) continue;
    const double last = std::nextafter(t_end, 0.0);
    try {
      const auto label =
          analytics::classify_stress(analytics::daily_means(out.reference_vpd.between(0.0, last)),
                                     out.reference_diameter.between(0.0, last), cfg.classifier);
      out.labels.push_back({day, label});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientData) throw;
    }
  }

  for (int day = 0; day * kSecondsPerDay < duration; ++day) {
    auto add = [&](double hour, const char* kind) {
      if (hour < 0.0) return;
      const double t = day * kSecondsPerDay + hour * 3600.0;
      if (t < duration) out.markers.push_back({t, kind});
    };
    add(s.watering_hour, "watering");
    add(s.dosing_hour, "salinity_dose_100ml_1M_NaCl");
  }
  std::stable_sort(out.markers.begin(), out.markers.end(),
                   [](const Marker& a, const Marker& b) { return a.t < b.t; });
  return out;
}

// --- configuration ------------------------------------------------------

namespace {

CalibrationTable load_table(const Config& c, const std::string& key, Extrapolation policy,
                            const CalibrationTable& fallback) {
  const std::string path = c.string_or(key, "");
  if (path.empty()) return fallback;
  std::filesystem::path p(path);
  if (p.is_relative()) p = c.base_dir() / p;
  return read_calibration_csv(p, policy);
}

}  // namespace

void read_power_section(const Config& c, power::PowerChainConfig& pw) {
  pw.capacitance = c.number_or("power.capacitance_f", pw.capacitance);
  pw.wake_voltage = c.number_or("power.wake_voltage_v", pw.wake_voltage);
  pw.brownout_voltage = c.number_or("power.brownout_voltage_v", pw.brownout_voltage);
  pw.converter_efficiency = c.number_or("power.converter_efficiency", pw.converter_efficiency);
  pw.sleep_current = c.number_or("power.sleep_current_a", pw.sleep_current);
  pw.active_current = c.number_or("power.active_current_a", pw.active_current);
  pw.reading_latency = c.number_or("power.reading_latency_s", pw.reading_latency);
  pw.sleep_linger = c.number_or("power.sleep_linger_s", pw.sleep_linger);
  pw.timestep = c.number_or("power.timestep_s", pw.timestep);
  pw.initial_voltage = c.number_or("power.initial_voltage_v", pw.initial_voltage);
  pw.validate();
}

void read_meg_section(const Config& c, meg::MegConfig& m) {
  m.internal_resistance = c.number_or("meg.internal_resistance_ohm", m.internal_resistance);
  m.voc_vs_rh = load_table(c, "meg.voc_table", Extrapolation::Clamp, m.voc_vs_rh);
  m.active_area = c.number_or("meg.active_area_m2", m.active_area);
  m.converter_efficiency = c.number_or("meg.converter_efficiency", m.converter_efficiency);
  if (c.has("meg.thickness_gain_table")) {
    m.thickness_gain =
        load_table(c, "meg.thickness_gain_table", Extrapolation::Clamp, m.voc_vs_rh);
    m.membrane_thickness = c.number("meg.membrane_thickness_m");
  }
  m.validate();
}

ScenarioFile load_scenario(const Config& c) {
  ScenarioFile f;
  PlantScenario& s = f.scenario;
  s.duration_days = c.number_or("scenario.duration_days", s.duration_days);
  s.condition = parse_condition(c.string_or("scenario.condition", "HEALTHY"));
  s.truth_step = c.number_or("scenario.truth_step_s", s.truth_step);
  s.seed = c.count_or("scenario.seed", 0);

  s.climate.air_temp_mean = c.number_or("climate.air_temp_mean_degc", s.climate.air_temp_mean);
  s.climate.air_temp_amplitude =
      c.number_or("climate.air_temp_amplitude_degc", s.climate.air_temp_amplitude);
  s.climate.air_rh_mean = c.number_or("climate.air_rh_mean_pct", s.climate.air_rh_mean);
  s.climate.air_rh_amplitude = c.number_or("climate.air_rh_amplitude_pct", s.climate.air_rh_amplitude);
  s.climate.peak_hour = c.number_or("climate.peak_hour_h", s.climate.peak_hour);
  s.leaf_temp_offset = c.number_or("climate.leaf_temp_offset_degc", s.leaf_temp_offset);
  s.leaf_rh_offset = c.number_or("climate.leaf_rh_offset_pct", s.leaf_rh_offset);
  s.leaf_temp_drift = c.number_or("climate.leaf_temp_drift_degc_per_day", s.leaf_temp_drift);
  s.air_rh_drift = c.number_or("climate.air_rh_drift_pct_per_day", s.air_rh_drift);

  s.initial_diameter = c.number_or("growth.initial_diameter_mm", s.initial_diameter);
  s.diameter_slope = c.number_or("growth.slope_mm_per_day", s.diameter_slope);

  s.temp_noise = c.number_or("noise.temp_sigma_degc", s.temp_noise);
  s.rh_noise = c.number_or("noise.rh_sigma_pct", s.rh_noise);
  s.strain_noise = c.number_or("noise.strain_sigma_rel", s.strain_noise);

  s.watering_hour = c.number_or("events.watering_hour_h", s.watering_hour);
  s.dosing_hour = c.number_or("events.dosing_hour_h", s.dosing_hour);

  PipelineConfig& p = f.pipeline;
  const std::string source = c.string_or("power.source", "constant");
  if (source == "constant") {
    p.source = PowerSource::Constant;
  } else if (source == "meg") {
    p.source = PowerSource::Meg;
  } else {
    fail(ErrorCode::ParseError, fmt::format("{}: power.source must be \"constant\" or \"meg\"",
                                            c.source()));
  }
  p.constant_power = c.number_or("power.constant_w", p.constant_power);
  p.meg_power_scale = c.number_or("power.meg_units", p.meg_power_scale);
  read_power_section(c, p.power);
  read_meg_section(c, p.meg);

  p.adc.bits = static_cast<int>(c.count_or("adc.bits", static_cast<std::size_t>(p.adc.bits)));
  p.adc.vref = c.number_or("adc.vref_v", p.adc.vref);
  p.adc.divider_fixed_resistor = c.number_or("adc.divider_resistor_ohm", p.adc.divider_fixed_resistor);
  p.reference_bits =
      static_cast<int>(c.count_or("adc.reference_bits", static_cast<std::size_t>(p.reference_bits)));
  p.adc.validate();

  p.humidity_sensor.curve =
      load_table(c, "calibration.humidity_curve", Extrapolation::Error, p.humidity_sensor.curve);
  p.humidity_sensor.validate();
  p.bend_curve = load_table(c, "calibration.bend_curve", Extrapolation::Error, p.bend_curve);
  p.geometry.arc_length = c.number_or("sensors.arc_length_m", p.geometry.arc_length);
  p.geometry.sensor_thickness = c.number_or("sensors.sensor_thickness_m", p.geometry.sensor_thickness);
  p.geometry.validate();

  auto& cl = p.classifier;
  cl.tau_vpd = c.number_or("classifier.tau_vpd_kpa_per_day", cl.tau_vpd);
  cl.tau_diameter = c.number_or("classifier.tau_diameter_mm_per_day", cl.tau_diameter);
  cl.vpd_window = c.number_or("classifier.vpd_window_days", cl.vpd_window / kSecondsPerDay) * kSecondsPerDay;
  cl.diameter_window =
      c.number_or("classifier.diameter_window_days", cl.diameter_window / kSecondsPerDay) * kSecondsPerDay;
  p.sunrise_hour = c.number_or("classifier.sunrise_h", p.sunrise_hour);
  p.sunset_hour = c.number_or("classifier.sunset_h", p.sunset_hour);

  c.require_all_used();
  s = s.resolved();
  return f;
}

// --- output -------------------------------------------------------------

namespace {

std::string num(double v) { return format_number(v); }

std::string readings_csv(const std::vector<Reading>& rows) {
  std::string out =
      "t_seconds,status,leaf_temp_code,air_temp_code,air_rh_code,leaf_rh_code,strain_code,"
      "leaf_temp_degc,air_temp_degc,air_rh_pct,leaf_rh_pct,diameter_mm,vpd_kpa\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}", num(r.t), r.status, r.leaf_temp_code,
                       r.air_temp_code, r.air_rh_code, r.leaf_rh_code, r.strain_code);
    if (r.ok) {
      out += fmt::format(",{},{},{},{},{},{}\n", num(r.leaf_temp), num(r.air_temp), num(r.air_rh),
                         num(r.leaf_rh), num(r.diameter), num(r.vpd.vpd));
    } else {
      out += ",,,,,,\n";
    }
  }
  return out;
}

std::string truth_csv(const Truth& t) {
  std::string out = "t_seconds,leaf_temp_degc,air_temp_degc,air_rh_pct,leaf_rh_pct,diameter_mm,vpd_kpa\n";
  for (std::size_t i = 0; i < t.diameter.size(); ++i) {
    out += fmt::format("{},{},{},{},{},{},{}\n", num(t.diameter[i].t), num(t.leaf_temp[i].value),
                       num(t.air_temp[i].value), num(t.air_rh[i].value), num(t.leaf_rh[i].value),
                       num(t.diameter[i].value), num(t.vpd[i].value));
  }
  return out;
}

std::string vpd_report_csv(const RunOutput& out) {
  struct Row {
    const Reading* r;
    const char* source;
  };
  std::vector<Row> rows;
  for (const auto& r : out.readings) {
    if (r.ok) rows.push_back({&r, "self"});
  }
  for (const auto& r : out.reference) {
    if (r.ok) rows.push_back({&r, "external"});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.r->t < b.r->t; });
  std::string csv = "t,leaf_temp_c,air_temp_c,air_rh_pct,vp_sat_kpa,vp_air_kpa,vpd_kpa,power_source\n";
  for (const auto& row : rows) {
    const Reading& r = *row.r;
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", num(r.t), num(r.leaf_temp), num(r.air_temp),
                       num(r.air_rh), num(r.vpd.vp_sat), num(r.vpd.vp_air), num(r.vpd.vpd),
                       row.source);
  }
  return csv;
}

std::string labels_csv(const std::vector<DailyLabel>& labels) {
  std::string out = "day,label,vpd_slope_kpa_per_day,diameter_slope_mm_per_day\n";
  for (const auto& l : labels) {
    out += fmt::format("{},{},{},{}\n", l.day, analytics::to_string(l.label.label),
                       num(l.label.vpd_slope), num(l.label.diameter_slope));
  }
  return out;
}

std::string markers_csv(const std::vector<Marker>& markers) {
  std::string out = "t_seconds,kind\n";
  for (const auto& m : markers) out += fmt::format("{},{}\n", num(m.t), m.kind);
  return out;
}

analytics::StressClass expected_label(PlantCondition c) {
  switch (c) {
    case PlantCondition::Healthy: return analytics::StressClass::Healthy;
    case PlantCondition::WaterStress: return analytics::StressClass::WaterStress;
    case PlantCondition::SalinityStress: return analytics::StressClass::SalinityStress;
  }
  return analytics::StressClass::Indeterminate;
}

}  // namespace

nlohmann::json run_report(const RunOutput& out, const PipelineConfig& cfg) {
  const PlantScenario& s = out.scenario;
  nlohmann::json doc = make_report("scenario_run");
  doc["scenario"] = {
      {"condition", to_string(s.condition)},
      {"duration_days", s.duration_days},
      {"seed", std::to_string(s.seed)},
      {"truth_step_s", s.truth_step},
      {"air_temp_mean_degc", s.climate.air_temp_mean},
      {"air_temp_amplitude_degc", s.climate.air_temp_amplitude},
      {"air_rh_mean_pct", s.climate.air_rh_mean},
      {"air_rh_amplitude_pct", s.climate.air_rh_amplitude},
      {"peak_hour_h", s.climate.peak_hour},
      {"leaf_temp_offset_degc", s.leaf_temp_offset},
      {"leaf_rh_offset_pct", s.leaf_rh_offset},
      {"leaf_temp_drift_degc_per_day", s.leaf_temp_drift},
      {"air_rh_drift_pct_per_day", s.air_rh_drift},
      {"initial_diameter_mm", s.initial_diameter},
      {"diameter_slope_mm_per_day", s.diameter_slope},
      {"temp_noise_degc", s.temp_noise},
      {"rh_noise_pct", s.rh_noise},
      {"strain_noise_rel", s.strain_noise},
  };

  const auto dn = power::count_day_night(out.power.events, cfg.sunrise_hour, cfg.sunset_hour);
  const auto& fs = out.power.final_state;
  doc["power"] = {
      {"source", to_string(cfg.source)},
      {"capacitance_f", cfg.power.capacitance},
      {"wake_voltage_v", cfg.power.wake_voltage},
      {"brownout_voltage_v", cfg.power.brownout_voltage},
      {"converter_efficiency_fraction", cfg.power.converter_efficiency},
      {"reading_latency_s", cfg.power.reading_latency},
      {"attempted_readings_count", out.power.events.size()},
      {"completed_readings_count", out.power.completed_readings()},
      {"day_readings_count", dn.day},
      {"night_readings_count", dn.night},
      {"energy_offered_j", fs.energy_offered},
      {"energy_harvested_j", fs.energy_harvested},
      {"energy_delivered_j", fs.energy_delivered},
      {"ledger_residual_j", out.power.ledger_residual(cfg.power)},
      {"final_cap_voltage_v", fs.cap_voltage},
  };
  if (cfg.source == PowerSource::Constant) {
    doc["power"]["constant_power_w"] = cfg.constant_power;
  } else {
    doc["power"]["meg_units_count"] = cfg.meg_power_scale;
  }

  std::size_t ref_rejected = 0;
  for (const auto& r : out.reference) ref_rejected += r.ok ? 0 : 1;
  doc["readings"] = {
      {"accepted_count", out.readings.size() - out.rejected_readings},
      {"rejected_count", out.rejected_readings},
      {"reference_accepted_count", out.reference.size() - ref_rejected},
      {"reference_rejected_count", ref_rejected},
      {"adc_bits", cfg.adc.bits},
      {"reference_adc_bits", cfg.reference_bits},
  };

  nlohmann::json vpd = nlohmann::json::object();
  if (!out.vpd.empty()) {
    const auto v = out.vpd.values();
    double err = 0.0;
    for (const auto& smp : out.vpd.samples()) {
      const TruthPoint p = truth_at(s, smp.t);
      err = std::max(err, std::abs(smp.value - analytics::vapor_pressures(
                                                   {p.leaf_temp, p.air_temp, p.air_rh}).vpd));
    }
    vpd["mean_kpa"] = mean(v);
    vpd["min_kpa"] = *std::min_element(v.begin(), v.end());
    vpd["max_kpa"] = *std::max_element(v.begin(), v.end());
    vpd["max_abs_error_kpa"] = err;
  }
  doc["vpd"] = vpd;

  nlohmann::json dia = nlohmann::json::object();
  dia["truth_initial_mm"] = s.initial_diameter;
  dia["truth_day_end_mm"] =
      truth_at(s, std::max(0.0, std::floor(s.duration_days - 1e-9)) * kSecondsPerDay).diameter;
  if (out.reference_diameter.size() >= 2) {
    dia["reference_slope_mm_per_day"] = linear_trend(out.reference_diameter, s.duration());
  }
  if (!out.diameter.empty()) {
    double err = 0.0;
    for (const auto& smp : out.diameter.samples()) {
      err = std::max(err, std::abs(smp.value - truth_at(s, smp.t).diameter));
    }
    dia["max_abs_error_mm"] = err;
  }
  doc["diameter"] = dia;

  const auto& cl = cfg.classifier;
  nlohmann::json labels = {
      {"tau_vpd_kpa_per_day", cl.tau_vpd},
      {"tau_diameter_mm_per_day", cl.tau_diameter},
      {"vpd_window_days", cl.vpd_window / kSecondsPerDay},
      {"diameter_window_days", cl.diameter_window / kSecondsPerDay},
      {"labelled_days", static_cast<double>(out.labels.size())},
      {"expected", analytics::to_string(expected_label(s.condition))},
  };
  if (!out.labels.empty()) {
    const auto& last = out.labels.back().label;
    labels["final"] = analytics::to_string(last.label);
    labels["final_vpd_slope_kpa_per_day"] = last.vpd_slope;
    labels["final_diameter_slope_mm_per_day"] = last.diameter_slope;
    for (const auto& l : out.labels) {
      if (l.label.label == expected_label(s.condition)) {
        labels["first_expected_label_days"] = static_cast<double>(l.day);
        break;
      }
    }
  } else {
    labels["final"] = "NONE";
  }
  doc["labels"] = labels;
  doc["markers_count"] = out.markers.size();
  return doc;
}

nlohmann::json write_run(const RunOutput& out, const PipelineConfig& cfg,
                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  nlohmann::json report = run_report(out, cfg);
  write_text_file_atomic(dir / "truth.csv", truth_csv(out.truth));
  write_text_file_atomic(dir / "readings.csv", readings_csv(out.readings));
  write_text_file_atomic(dir / "reference.csv", readings_csv(out.reference));
  write_text_file_atomic(dir / "events.csv", power::event_log_to_csv(out.power.events));
  write_text_file_atomic(dir / "vpd_report.csv", vpd_report_csv(out));
  write_text_file_atomic(dir / "diameter.csv", series_to_csv(out.diameter, "diameter_mm"));
  write_text_file_atomic(dir / "labels.csv", labels_csv(out.labels));
  write_text_file_atomic(dir / "markers.csv", markers_csv(out.markers));
  write_text_file_atomic(dir / "report.json", write_report(report));
  return report;
}

}  // namespace planta::scenario
