#include "planta/meg.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "planta/error.hpp"

namespace planta::meg {

namespace {
constexpr double kSensitivity = 4.2e-3;  // V per %RH
}

CalibrationTable default_voc_table() {
  return CalibrationTable::linear(30.0, 90.0, kSensitivity * 30.0, kSensitivity * 90.0, 7,
                                  Extrapolation::Clamp, Unit::PercentRh, Unit::Volt);
}

double default_active_area() {
  constexpr double radius = 2.5e-3;
  return std::numbers::pi * radius * radius;
}

void MegConfig::validate() const {
  if (!(internal_resistance > 0.0)) {
    fail(ErrorCode::NonPositive, "MEG internal resistance must be > 0");
  }
  if (!(active_area > 0.0)) fail(ErrorCode::NonPositive, "MEG active area must be > 0");
  if (!(converter_efficiency > 0.0 && converter_efficiency <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "MEG converter efficiency must be in (0, 1]");
  }
  if (thickness_gain) {
    const auto& g = *thickness_gain;
    if (!g.increasing()) {
      fail(ErrorCode::InvariantViolation, "thickness gain must be non-decreasing");
    }
    if (g.max_response() > 1.0 + 1e-12) {
      fail(ErrorCode::InvariantViolation, "thickness gain must be <= 1 at the saturation knee");
    }
    if (g.min_response() <= 0.0) {
      fail(ErrorCode::InvariantViolation, "thickness gain must be positive");
    }
    if (!(membrane_thickness > 0.0)) {
      fail(ErrorCode::NonPositive, "membrane thickness must be > 0 when a gain table is set");
    }
  }
}

double thickness_gain(const MegConfig& cfg) {
  if (!cfg.thickness_gain) return 1.0;
  // The plateau past the knee is the clamp region of the table.
  return cfg.thickness_gain->with_policy(Extrapolation::Clamp).eval(cfg.membrane_thickness);
}

double open_circuit_voltage(const MegConfig& cfg, double rh_pct) {
  require_rh(rh_pct);
  return cfg.voc_vs_rh.eval(rh_pct) * thickness_gain(cfg);
}

LoadPoint thevenin_point(double voc, double r_int, double load) {
  if (!(load >= 0.0)) fail(ErrorCode::NonPositive, "load resistance must be >= 0");
  if (!(r_int > 0.0)) fail(ErrorCode::NonPositive, "internal resistance must be > 0");
  LoadPoint p;
  p.load_resistance = load;
  if (std::isinf(load)) {
    p.voltage = voc;
    p.current = 0.0;
    p.power = 0.0;
    return p;
  }
  p.current = voc / (load + r_int);
  p.voltage = voc * load / (load + r_int);
  p.power = p.voltage * p.current;
  return p;
}

LoadPoint operating_point(const MegConfig& cfg, double rh_pct, double load) {
  return thevenin_point(open_circuit_voltage(cfg, rh_pct), cfg.internal_resistance, load);
}

MaxPowerPoint find_mpp(double voc, double r_int, std::span<const double> load_grid) {
  if (load_grid.empty()) fail(ErrorCode::EmptyGrid, "MPP search needs a non-empty load grid");
  MaxPowerPoint best{std::numeric_limits<double>::quiet_NaN(), -1.0};
  for (double r : load_grid) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      fail(ErrorCode::NonPositive, fmt::format("load grid entry {} is not a positive resistance", r));
    }
    const double p = thevenin_point(voc, r_int, r).power;
    if (p > best.power || (p == best.power && r < best.load_resistance)) {
      best = {r, p};
    }
  }
  return best;
}

MaxPowerPoint find_mpp(const MegConfig& cfg, double rh_pct, std::span<const double> load_grid) {
  return find_mpp(open_circuit_voltage(cfg, rh_pct), cfg.internal_resistance, load_grid);
}

double delivered_power(const MegConfig& cfg, double rh_pct) {
  const double voc = open_circuit_voltage(cfg, rh_pct);
  return cfg.converter_efficiency * voc * voc / (4.0 * cfg.internal_resistance);
}

double power_density(double power, const MegConfig& cfg) {
  if (!(power >= 0.0)) fail(ErrorCode::NonPositive, "power must be >= 0");
  if (!(cfg.active_area > 0.0)) fail(ErrorCode::NonPositive, "active area must be > 0");
  return power / cfg.active_area;
}

EfficiencyResult evaporation_efficiency(const EfficiencyInputs& inp) {
  if (!(inp.output_energy > 0.0) || !(inp.evaporated_mass > 0.0) ||
      !(inp.molar_mass_water > 0.0) || !(inp.heat_of_evaporation > 0.0)) {
    fail(ErrorCode::NonPositive, "efficiency inputs must all be strictly positive");
  }
  EfficiencyResult r;
  r.input_energy = inp.evaporated_mass / inp.molar_mass_water * inp.heat_of_evaporation;
  r.efficiency = inp.output_energy / r.input_energy;
  return r;
}

}  // namespace planta::meg
