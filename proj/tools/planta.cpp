// planta: command-line front end for the plant sensing digital twin.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "planta/analytics.hpp"
#include "planta/calibration.hpp"
#include "planta/config.hpp"
#include "planta/csv.hpp"
#include "planta/error.hpp"
#include "planta/kirigami.hpp"
#include "planta/meg.hpp"
#include "planta/powerchain.hpp"
#include "planta/report.hpp"
#include "planta/scenario.hpp"
#include "planta/stats.hpp"
#include "planta/stem_table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace planta;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Infeasible: return kExitInfeasible;
    case ErrorCode::InvalidArgument: return kExitUsage;
    default: return kExitData;
  }
}

bool g_json = false;

void print_flat(const json& node, const std::string& prefix) {
  if (node.is_object()) {
    for (const auto& [k, v] : node.items()) {
      print_flat(v, prefix.empty() ? k : prefix + "." + k);
    }
    return;
  }
  std::string text;
  if (node.is_string()) {
    text = node.get<std::string>();
  } else if (node.is_number_float()) {
    text = format_number(round_significant(node.get<double>(), 6));
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      text += (i ? "," : "");
      text += node[i].is_number_float()
                  ? format_number(round_significant(node[i].get<double>(), 6))
                  : node[i].dump();
    }
  } else {
    text = node.dump();
  }
  std::cout << prefix << ": " << text << "\n";
}

// Text mode prints "key: value" lines, skipping the envelope fields.
void emit(const json& doc) {
  if (g_json) {
    std::cout << write_report(doc);
    return;
  }
  json body = doc;
  body.erase("schema_version");
  body.erase("tool_version");
  body.erase("kind");
  print_flat(body, "");
}

Config load_optional_config(const std::string& path) {
  return path.empty() ? Config{} : Config::read(path);
}

// --- subcommands -----------------------------------------------------------

struct VpdArgs {
  double leaf_temp = 0.0;
  double air_temp = 0.0;
  double rh = 0.0;
};

void run_vpd(const VpdArgs& a) {
  const auto r = analytics::vapor_pressures({a.leaf_temp, a.air_temp, a.rh});
  json doc = make_report("vpd");
  doc["vp_sat_kpa"] = r.vp_sat;
  doc["vp_air_kpa"] = r.vp_air;
  doc["vpd_kpa"] = r.vpd;
  doc["negative_vpd"] = r.negative;
  emit(doc);
}

struct MppArgs {
  std::string config;
  double rh = 0.0;
  std::vector<double> loads;
};

void run_mpp(const MppArgs& a) {
  const Config c = load_optional_config(a.config);
  meg::MegConfig m;
  scenario::read_meg_section(c, m);
  c.require_all_used();
  std::vector<double> grid = a.loads;
  if (grid.empty()) {
    for (int r = 1; r <= 200; ++r) grid.push_back(r);
  }
  const double voc = meg::open_circuit_voltage(m, a.rh);
  const auto mpp = meg::find_mpp(voc, m.internal_resistance, grid);
  const double density = meg::power_density(mpp.power, m);
  json doc = make_report("mpp");
  doc["rh_pct"] = a.rh;
  doc["voc_v"] = voc;
  doc["load_resistance_ohm"] = mpp.load_resistance;
  doc["power_w"] = mpp.power;
  doc["power_density_w_per_m2"] = density;
  doc["power_density_uw_per_cm2"] = meg::to_microwatt_per_cm2(density);
  emit(doc);
}

struct EfficiencyArgs {
  double output_joules = 0.0;
  double evaporated_grams = 0.0;
  double molar_mass = 18.015;
  double heat = 44000.0;
};

void run_efficiency(const EfficiencyArgs& a) {
  const auto r = meg::evaporation_efficiency({a.output_joules, a.evaporated_grams, a.molar_mass, a.heat});
  json doc = make_report("efficiency");
  doc["output_energy_j"] = a.output_joules;
  doc["evaporated_mass_g"] = a.evaporated_grams;
  doc["input_energy_j"] = r.input_energy;
  doc["efficiency_fraction"] = r.efficiency;
  emit(doc);
}

json ledger_json(const power::SimulationResult& sim, const power::PowerChainConfig& cfg) {
  const auto& fs = sim.final_state;
  const auto dn = power::count_day_night(sim.events);
  return {
      {"attempted_readings_count", sim.events.size()},
      {"completed_readings_count", sim.completed_readings()},
      {"day_readings_count", dn.day},
      {"night_readings_count", dn.night},
      {"initial_energy_j", sim.initial_energy},
      {"energy_offered_j", fs.energy_offered},
      {"energy_harvested_j", fs.energy_harvested},
      {"energy_delivered_j", fs.energy_delivered},
      {"stored_energy_j", cfg.stored_energy(fs.cap_voltage)},
      {"ledger_residual_j", sim.ledger_residual(cfg)},
      {"final_cap_voltage_v", fs.cap_voltage},
  };
}

struct SimulateArgs {
  std::string profile;
  std::string config;
  double hours = 24.0;
  std::string events_out;
};

void run_simulate(const SimulateArgs& a) {
  const Config c = load_optional_config(a.config);
  power::PowerChainConfig cfg;
  scenario::read_power_section(c, cfg);
  c.require_all_used();
  const auto profile = power::read_harvest_profile(a.profile);
  const auto sim = power::simulate(cfg, profile, a.hours * 3600.0);
  if (!a.events_out.empty()) write_text_file_atomic(a.events_out, power::event_log_to_csv(sim.events));
  json doc = make_report("simulate_power");
  doc["duration_h"] = a.hours;
  doc["ledger"] = ledger_json(sim, cfg);
  json events = json::array();
  for (const auto& ev : sim.events) {
    events.push_back({{"start_time_s", ev.start_time},
                      {"completed", ev.completed},
                      {"energy_used_j", ev.energy_used}});
  }
  if (g_json) {
    doc["events"] = events;
    emit(doc);
  } else {
    std::cout << power::event_log_to_csv(sim.events);
    emit(doc);
  }
}

struct MinPowerArgs {
  std::size_t readings = 5;
  double hours = 24.0;
  std::string config;
};

void run_min_power(const MinPowerArgs& a) {
  const Config c = load_optional_config(a.config);
  power::PowerChainConfig cfg;
  scenario::read_power_section(c, cfg);
  c.require_all_used();
  const double p = power::min_power_for_readings(cfg, a.readings, a.hours * 3600.0);
  json doc = make_report("min_power");
  doc["readings_count"] = a.readings;
  doc["horizon_h"] = a.hours;
  doc["min_power_w"] = p;
  emit(doc);
}

struct DiameterArgs {
  double rel_resistance = 0.0;
  double arc = 0.021;
  double thickness = 205e-6;
  std::string bend_curve;
};

void run_diameter(const DiameterArgs& a) {
  kirigami::StemGeometry geo;
  geo.arc_length = a.arc;
  geo.sensor_thickness = a.thickness;
  geo.validate();
  const CalibrationTable curve =
      a.bend_curve.empty() ? kirigami::default_bend_curve(kirigami::GaugeModel{})
                           : read_calibration_csv(a.bend_curve, Extrapolation::Error);
  const double d = kirigami::diameter_from_reading(geo, curve, a.rel_resistance);
  const double eps = curve.invert(a.rel_resistance);
  json doc = make_report("diameter");
  doc["rel_resistance_rel"] = a.rel_resistance;
  doc["bending_strain"] = eps;
  doc["diameter_mm"] = d * 1e3;
  doc["wrap_angle_deg"] = kirigami::wrap_angle(geo.arc_length, d / 2.0);
  emit(doc);
}

struct StemsArgs {
  std::string table;
  std::string vpd;
  double tau_d = 0.003;
  double tau_v = 0.02;
};

void run_analyze_stems(const StemsArgs& a) {
  const fs::path path = a.table.empty() ? data_dir() / "stem_diameters.csv" : fs::path(a.table);
  const StemTable table = read_stem_table(path);
  analytics::ClassifierConfig cl;
  cl.tau_diameter = a.tau_d;
  cl.tau_vpd = a.tau_v;
  std::optional<TimeSeries> vpd;
  if (!a.vpd.empty()) vpd = read_series_csv(a.vpd, Unit::Kilopascal, "vpd_kpa");

  const double span = (table.rows.back().day - table.rows.front().day) * kSecondsPerDay;
  const auto offsets = stretched_offset_check(table);
  json doc = make_report("analyze_stems");
  doc["rows_count"] = table.rows.size();
  for (std::size_t k = 0; k < 3; ++k) {
    const auto c = static_cast<Condition>(k);
    json entry;
    const auto pristine = table.series(c, false);
    entry["slope_mm_per_day"] = table.rows.size() >= 2 ? linear_trend(pristine, span) : 0.0;
    entry["stretched_slope_mm_per_day"] =
        table.rows.size() >= 2 ? linear_trend(table.series(c, true), span) : 0.0;
    entry["first_mm"] = pristine.front().value;
    entry["last_mm"] = pristine.back().value;
    entry["offset_mean_mm"] = offsets[k].mean;
    entry["offset_max_mm"] = offsets[k].max;
    entry["offset_max_deviation_mm"] = offsets[k].max_deviation;
    if (table.rows.size() >= 2) {
      if (vpd) {
        const auto label = analytics::classify_stress(*vpd, pristine, cl);
        entry["label"] = analytics::to_string(label.label);
        entry["vpd_slope_kpa_per_day"] = label.vpd_slope;
        entry["window_slope_mm_per_day"] = label.diameter_slope;
      } else {
        // Diameter evidence alone can only clear a plant, not name a stress.
        const double s_d = linear_trend(pristine, cl.diameter_window);
        entry["label"] = s_d >= -cl.tau_diameter ? "HEALTHY" : "INDETERMINATE";
        entry["window_slope_mm_per_day"] = s_d;
      }
    }
    doc[std::string(to_string(c))] = entry;
  }
  doc["tau_diameter_mm_per_day"] = cl.tau_diameter;
  doc["tau_vpd_kpa_per_day"] = cl.tau_vpd;
  emit(doc);
}

struct LagArgs {
  std::string lower;
  std::string upper;
  double max_lag_min = 480.0;
  double tol = 1.0;
  std::optional<double> watering_s;
};

void run_lag(const LagArgs& a) {
  const auto lower = read_series_csv(a.lower, Unit::PercentRh);
  const auto upper = read_series_csv(a.upper, Unit::PercentRh);
  analytics::LagConfig cfg;
  cfg.max_lag = a.max_lag_min * 60.0;
  cfg.equal_tol = a.tol;
  cfg.watering_time = a.watering_s;
  const auto r = analytics::translocation_lag(lower, upper, cfg);
  json doc = make_report("lag");
  doc["lag_min"] = r.lag / 60.0;
  doc["equalization_min"] = r.equalization_time / 60.0;
  doc["correlation_fraction"] = r.correlation;
  doc["sample_period_s"] = r.sample_period;
  emit(doc);
}

struct BaselineArgs {
  std::string input;
  std::string out;
  std::string events_out;
  std::size_t window = 60;
  double k_mad = 5.0;
  double max_pulse = 120.0;
  double noise_floor = 1e-4;
};

void run_baseline(const BaselineArgs& a) {
  const auto series = read_series_csv(a.input, Unit::RelResistance, "rel_resistance");
  kirigami::BaselineConfig cfg;
  cfg.window = a.window;
  cfg.k_mad = a.k_mad;
  cfg.max_pulse_duration = a.max_pulse;
  cfg.noise_floor = a.noise_floor;
  const auto r = kirigami::baseline_correct(series, cfg);
  if (!a.out.empty()) write_text_file_atomic(a.out, series_to_csv(r.corrected, "rel_resistance"));
  if (!a.events_out.empty()) write_text_file_atomic(a.events_out, kirigami::baseline_events_to_csv(r));
  json doc = make_report("baseline");
  doc["samples_count"] = series.size();
  doc["disturbances_count"] = r.disturbances.size();
  doc["shifts_count"] = r.shifts.size();
  if (g_json) {
    json events = json::array();
    for (const auto* list : {&r.disturbances, &r.shifts}) {
      for (const auto& ev : *list) {
        events.push_back({{"onset_s", ev.onset},
                          {"duration_s", ev.duration},
                          {"type", std::string(kirigami::to_string(ev.type))}});
      }
    }
    doc["events"] = events;
  }
  emit(doc);
}

struct ScenarioArgs {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void run_scenario(const ScenarioArgs& a) {
  auto sf = scenario::load_scenario(Config::read(a.file));
  if (a.seed) sf.scenario.seed = *a.seed;
  const auto out = scenario::end_to_end(sf.scenario, sf.pipeline);
  const json report = scenario::write_run(out, sf.pipeline, a.out);
  if (g_json) {
    std::cout << write_report(report);
  } else {
    std::cout << "out: " << a.out << "\n";
    print_flat(json{{"condition", report["scenario"]["condition"]},
                    {"completed_readings", report["power"]["completed_readings_count"]},
                    {"final_label", report["labels"]["final"]}},
               "");
  }
}

void print_error(ErrorCode code, const std::string& message, int exit_code) {
  if (g_json) {
    json err = {{"error", {{"code", std::string(to_string(code))},
                           {"message", message},
                           {"exit_code", exit_code}}}};
    std::cerr << err.dump() << "\n";
  } else {
    std::cerr << "error [" << to_string(code) << "]: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital twin of a self-powered plant sensing suite", "planta"};
  app.set_version_flag("--version", tool_version());
  app.add_flag("--json", g_json, "Machine-readable JSON output (errors go to stderr as JSON)");
  app.require_subcommand(1);
  app.fallthrough();

  VpdArgs vpd;
  auto* c_vpd = app.add_subcommand("vpd", "Vapor pressure deficit at one instant");
  c_vpd->add_option("--leaf-temp", vpd.leaf_temp, "Temperature beneath the leaf, degC")->required();
  c_vpd->add_option("--air-temp", vpd.air_temp, "Open-air temperature, degC")->required();
  c_vpd->add_option("--rh", vpd.rh, "Open-air relative humidity, %RH")->required();

  MppArgs mpp;
  auto* c_mpp = app.add_subcommand("mpp", "Maximum power point of the generator");
  c_mpp->add_option("--config", mpp.config, "Config file with a [meg] section");
  c_mpp->add_option("--rh", mpp.rh, "Relative humidity, %RH")->required();
  c_mpp->add_option("--loads", mpp.loads, "Load grid in ohm (default 1..200)")->delimiter(',');

  EfficiencyArgs eff;
  auto* c_eff = app.add_subcommand("efficiency", "Evaporation-energy conversion efficiency");
  c_eff->add_option("--output-joules", eff.output_joules, "Electrical output energy, J")->required();
  c_eff->add_option("--evaporated-grams", eff.evaporated_grams, "Evaporated water, g")->required();
  c_eff->add_option("--molar-mass", eff.molar_mass, "g/mol")->capture_default_str();
  c_eff->add_option("--heat", eff.heat, "Heat of evaporation, J/mol")->capture_default_str();

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate-power", "Run the intermittent power chain");
  c_sim->add_option("--profile", sim.profile, "CSV t_seconds,power_watts")->required();
  c_sim->add_option("--hours", sim.hours, "Simulated duration, h")->capture_default_str();
  c_sim->add_option("--config", sim.config, "Config file with a [power] section");
  c_sim->add_option("--events", sim.events_out, "Write the event log CSV here");

  MinPowerArgs minp;
  auto* c_min = app.add_subcommand("min-power", "Smallest constant harvest for n readings");
  c_min->add_option("--readings", minp.readings, "Completed readings required")->required();
  c_min->add_option("--hours", minp.hours, "Horizon, h")->required();
  c_min->add_option("--config", minp.config, "Config file with a [power] section");

  DiameterArgs dia;
  auto* c_dia = app.add_subcommand("diameter", "Stem diameter from a strain reading");
  c_dia->add_option("--rel-resistance", dia.rel_resistance, "dR/R0")->required();
  c_dia->add_option("--arc", dia.arc, "Sensor arc length, m")->capture_default_str();
  c_dia->add_option("--thickness", dia.thickness, "Sensor thickness, m")->capture_default_str();
  c_dia->add_option("--bend-curve", dia.bend_curve, "Calibration CSV (dR/R0 vs bending strain)");

  StemsArgs stems;
  auto* c_stems = app.add_subcommand("analyze-stems", "Slopes, offsets and labels for a stem table");
  c_stems->add_option("--table", stems.table, "Stem table CSV (default: shipped fixture)");
  c_stems->add_option("--vpd", stems.vpd, "VPD series CSV t_seconds,vpd_kpa for full labels");
  c_stems->add_option("--tau-diameter", stems.tau_d, "mm/day")->capture_default_str();
  c_stems->add_option("--tau-vpd", stems.tau_v, "kPa/day")->capture_default_str();

  LagArgs lag;
  auto* c_lag = app.add_subcommand("lag", "Water translocation lag between two RH series");
  c_lag->add_option("--lower", lag.lower, "Lower-leaf RH CSV")->required();
  c_lag->add_option("--upper", lag.upper, "Upper-leaf RH CSV")->required();
  c_lag->add_option("--max-lag", lag.max_lag_min, "Largest lag searched, min")->capture_default_str();
  c_lag->add_option("--tol", lag.tol, "Equalization tolerance, %RH")->capture_default_str();
  c_lag->add_option("--watering", lag.watering_s, "Watering time, s");

  BaselineArgs base;
  auto* c_base = app.add_subcommand("baseline", "Disturbance rejection on a strain series");
  c_base->add_option("--input", base.input, "CSV t_seconds,rel_resistance")->required();
  c_base->add_option("--out", base.out, "Write the corrected series here");
  c_base->add_option("--events", base.events_out, "Write the event log here");
  c_base->add_option("--window", base.window, "Baseline window, samples")->capture_default_str();
  c_base->add_option("--k-mad", base.k_mad)->capture_default_str();
  c_base->add_option("--max-pulse", base.max_pulse, "s")->capture_default_str();
  c_base->add_option("--noise-floor", base.noise_floor)->capture_default_str();

  ScenarioArgs scen;
  auto* c_scen = app.add_subcommand("scenario", "Synthetic end-to-end runs");
  c_scen->require_subcommand(1);
  auto* c_run = c_scen->add_subcommand("run", "Run one scenario file");
  c_run->add_option("--file", scen.file, "Scenario file")->required();
  c_run->add_option("--seed", scen.seed, "Overrides the file's seed");
  c_run->add_option("--out", scen.out, "Output directory")->required();
  c_run->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (g_json) {
      json err = {{"error", {{"code", "UsageError"}, {"message", e.what()}, {"exit_code", kExitUsage}}}};
      std::cerr << err.dump() << "\n";
    } else {
      app.exit(e);
    }
    return kExitUsage;
  }

  try {
    if (*c_vpd) run_vpd(vpd);
    else if (*c_mpp) run_mpp(mpp);
    else if (*c_eff) run_efficiency(eff);
    else if (*c_sim) run_simulate(sim);
    else if (*c_min) run_min_power(minp);
    else if (*c_dia) run_diameter(dia);
    else if (*c_stems) run_analyze_stems(stems);
    else if (*c_lag) run_lag(lag);
    else if (*c_base) run_baseline(base);
    else if (*c_run) run_scenario(scen);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    print_error(e.code(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    print_error(ErrorCode::Io, e.what(), kExitData);
    return kExitData;
  }
  return 0;
}
