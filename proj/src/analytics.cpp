#include "planta/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <numbers>

#include "planta/error.hpp"
#include "planta/stats.hpp"

namespace planta::analytics {

double saturation_vapor_pressure(double temp_c) {
  return 0.6107 * std::pow(10.0, 7.5 * temp_c / (237.3 + temp_c));
}

VpdResult vapor_pressures(const VpdInputs& inp) {
  auto check_temp = [](double t, const char* name) {
    if (!(t >= -20.0 && t <= 60.0)) {
      fail(ErrorCode::SanityRange, fmt::format("{} {} degC outside [-20, 60]", name, t));
    }
  };
  check_temp(inp.leaf_temp, "leaf temperature");
  check_temp(inp.air_temp, "air temperature");
  if (!(inp.air_rh >= 0.0 && inp.air_rh <= 100.0)) {
    fail(ErrorCode::SanityRange, fmt::format("air RH {} outside [0, 100]", inp.air_rh));
  }
  VpdResult r;
  r.vp_sat = saturation_vapor_pressure(inp.leaf_temp);
  r.vp_air = saturation_vapor_pressure(inp.air_temp) * (inp.air_rh / 100.0);
  r.vpd = r.vp_sat - r.vp_air;
  r.negative = r.vpd < 0.0;
  return r;
}

std::string_view to_string(StressClass label) {
  switch (label) {
    case StressClass::Healthy: return "HEALTHY";
    case StressClass::WaterStress: return "WATER_STRESS";
    case StressClass::SalinityStress: return "SALINITY_STRESS";
    case StressClass::Indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

StressClass parse_stress_class(std::string_view text) {
  for (auto c : {StressClass::Healthy, StressClass::WaterStress, StressClass::SalinityStress,
                 StressClass::Indeterminate}) {
    if (to_string(c) == text) return c;
  }
  fail(ErrorCode::ParseError, "unknown stress class '" + std::string(text) + "'");
}

StressClass classify_slopes(double vpd_slope, double diameter_slope, const ClassifierConfig& cfg) {
  const bool shrinking = diameter_slope < -cfg.tau_diameter;
  if (shrinking && vpd_slope > cfg.tau_vpd) return StressClass::WaterStress;
  if (shrinking && vpd_slope < -cfg.tau_vpd) return StressClass::SalinityStress;
  if (!shrinking && std::abs(vpd_slope) <= cfg.tau_vpd) return StressClass::Healthy;
  return StressClass::Indeterminate;
}

StressLabel classify_stress(const TimeSeries& vpd, const TimeSeries& diameter,
                            const ClassifierConfig& cfg) {
  const TimeSeries dia_mm = diameter.converted(Unit::Millimeter);
  StressLabel out;
  out.vpd_slope = linear_trend(vpd, cfg.vpd_window);
  out.diameter_slope = linear_trend(dia_mm, cfg.diameter_window);
  out.label = classify_slopes(out.vpd_slope, out.diameter_slope, cfg);
  return out;
}

TimeSeries daily_means(const TimeSeries& series) {
  std::map<long long, std::pair<double, std::size_t>> bins;
  for (const auto& s : series.samples()) {
    auto& [sum, count] = bins[static_cast<long long>(std::floor(s.t / kSecondsPerDay))];
    sum += s.value;
    ++count;
  }
  std::vector<Sample> out;
  out.reserve(bins.size());
  for (const auto& [day, acc] : bins) {
    out.push_back({(static_cast<double>(day) + 0.5) * kSecondsPerDay,
                   acc.first / static_cast<double>(acc.second)});
  }
  return TimeSeries(series.channel() + "_daily", series.unit(), std::move(out));
}

namespace {

struct CommonGrid {
  double period = 0.0;
  std::vector<double> t;
  std::vector<double> lower;
  std::vector<double> upper;
};

CommonGrid common_grid(const TimeSeries& lower, const TimeSeries& upper) {
  if (lower.size() < 2 || upper.size() < 2) {
    fail(ErrorCode::InsufficientData, "lag estimation needs at least 2 samples per series");
  }
  std::vector<double> diffs;
  for (std::size_t i = 1; i < lower.size(); ++i) diffs.push_back(lower[i].t - lower[i - 1].t);
  CommonGrid g;
  g.period = median(std::move(diffs));
  const double t0 = std::max(lower.front().t, upper.front().t);
  const double t1 = std::min(lower.back().t, upper.back().t);
  if (!(t1 > t0)) fail(ErrorCode::InsufficientData, "series do not overlap in time");
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / g.period + 1e-9)) + 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * g.period;
    g.t.push_back(t);
    g.lower.push_back(lower.interpolate(t));
    g.upper.push_back(upper.interpolate(t));
  }
  return g;
}

// Pearson correlation of the OLS residuals of two equal-length segments.
double detrended_correlation(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mid = static_cast<double>(n - 1) / 2.0;
  double sxx_idx = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxx_idx += (static_cast<double>(i) - mid) * (static_cast<double>(i) - mid);
  auto residuals = [&](std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m += e;
    m /= static_cast<double>(n);
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += (static_cast<double>(i) - mid) * (v[i] - m);
    const double slope = sxy / sxx_idx;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = v[i] - m - slope * (static_cast<double>(i) - mid);
    return r;
  };
  const auto rx = residuals(x);
  const auto ry = residuals(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += rx[i] * ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

LagResult lag_on_grid(const CommonGrid& g, const LagConfig& cfg) {
  const std::size_t n = g.t.size();
  const std::size_t min_overlap = std::max<std::size_t>(cfg.min_overlap, 3);
  if (n < min_overlap) fail(ErrorCode::InsufficientData, "too few common samples for lag estimation");
  const auto max_k = std::min(static_cast<std::size_t>(std::floor(cfg.max_lag / g.period + 1e-9)),
                              n - min_overlap);
  LagResult best;
  best.sample_period = g.period;
  best.correlation = -2.0;
  bool found = false;
  const std::span<const double> lower(g.lower);
  const std::span<const double> upper(g.upper);
  for (std::size_t k = 0; k <= max_k; ++k) {
    const double r = detrended_correlation(lower.subspan(0, n - k), upper.subspan(k, n - k));
    if (std::isnan(r)) continue;
    if (r > best.correlation) {
      best.correlation = r;
      best.lag = static_cast<double>(k) * g.period;
      found = true;
    }
  }
  if (!found) fail(ErrorCode::InsufficientData, "series have no variance after detrending");
  return best;
}

}  // namespace

LagResult estimate_lag(const TimeSeries& lower, const TimeSeries& upper, const LagConfig& cfg) {
  if (!(cfg.max_lag >= 0.0)) fail(ErrorCode::InvalidArgument, "max_lag must be >= 0");
  return lag_on_grid(common_grid(lower, upper), cfg);
}

LagResult translocation_lag(const TimeSeries& lower, const TimeSeries& upper,
                            const LagConfig& cfg) {
  if (!(cfg.equal_tol >= 0.0)) fail(ErrorCode::InvalidArgument, "equal_tol must be >= 0");
  const auto g = common_grid(lower, upper);
  LagResult out = lag_on_grid(g, cfg);

  const double marker = cfg.watering_time.value_or(g.t.front());
  const std::size_t sustain = std::max<std::size_t>(cfg.sustain_samples, 1);
  std::size_t i = 0;
  while (i < g.t.size() && g.t[i] < marker) ++i;
  // Wait until the two leaves actually differ; equal from the start means
  // nothing to equalise.
  while (i < g.t.size() && std::abs(g.lower[i] - g.upper[i]) <= cfg.equal_tol) ++i;
  if (i == g.t.size()) {
    out.equalization_time = 0.0;
    return out;
  }
  std::size_t run = 0;
  for (; i < g.t.size(); ++i) {
    if (std::abs(g.lower[i] - g.upper[i]) <= cfg.equal_tol) {
      if (++run == sustain) {
        out.equalization_time = g.t[i + 1 - sustain] - marker;
        return out;
      }
    } else {
      run = 0;
    }
  }
  fail(ErrorCode::NoEqualization,
       fmt::format("|lower - upper| never stayed within {} for {} samples", cfg.equal_tol, sustain));
}

void ImpedanceCircuit::validate() const {
  if (!(r_series > 0.0) || !(r_ct > 0.0) || !(c_dl > 0.0)) {
    fail(ErrorCode::NonPositive, "equivalent circuit components must be > 0");
  }
}

std::complex<double> impedance(const ImpedanceCircuit& circuit, double frequency_hz) {
  circuit.validate();
  if (!(frequency_hz >= 0.0)) fail(ErrorCode::InvalidArgument, "frequency must be >= 0");
  if (std::isinf(frequency_hz)) return {circuit.r_series, 0.0};
  const std::complex<double> branch =
      circuit.r_ct /
      std::complex<double>(1.0, 2.0 * std::numbers::pi * frequency_hz * circuit.r_ct * circuit.c_dl);
  return circuit.r_series + branch;
}

double measured_impedance(double v_ac, double i_ac) {
  if (i_ac == 0.0) fail(ErrorCode::ZeroCurrent, "AC current is zero");
  return v_ac / i_ac;
}

std::vector<double> log_frequency_grid(double f_lo, double f_hi, std::size_t points) {
  if (!(f_lo > 0.0 && f_hi > f_lo) || points < 2) {
    fail(ErrorCode::InvalidArgument, "need 0 < f_lo < f_hi and >= 2 points");
  }
  std::vector<double> out;
  out.reserve(points);
  const double step = std::log10(f_hi / f_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(f_lo * std::pow(10.0, step * static_cast<double>(i)));
  }
  out.back() = f_hi;
  return out;
}

}  // namespace planta::analytics
