#include "planta/kirigami.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "planta/csv.hpp"
#include "planta/error.hpp"
#include "planta/stats.hpp"

namespace planta::kirigami {

void GaugeModel::validate() const {
  if (!(gf_low > gf_high && gf_high > 0.0)) {
    fail(ErrorCode::InvalidArgument, "gauge factors need gf_low > gf_high > 0");
  }
  if (!(knee_strain > 0.0 && knee_strain < max_strain)) {
    fail(ErrorCode::InvalidArgument, "need 0 < knee_strain < max_strain");
  }
  if (!(r_baseline > 0.0)) fail(ErrorCode::NonPositive, "baseline resistance must be > 0");
}

double GaugeModel::max_rel_resistance() const {
  return gf_low * knee_strain + gf_high * (max_strain - knee_strain);
}

void StemGeometry::validate() const {
  if (!(arc_length > 0.0) || !(sensor_thickness > 0.0)) {
    fail(ErrorCode::NonPositive, "arc length and sensor thickness must be > 0");
  }
  if (curvature_angle < 0.0 || curvature_radius < 0.0 || bending_radius < 0.0) {
    fail(ErrorCode::NonPositive, "geometry lengths and angles must be positive when set");
  }
  if (curvature_angle > 0.0 && curvature_radius > 0.0) {
    const double expected = kirigami::curvature_radius(arc_length, curvature_angle);
    if (std::abs(expected - curvature_radius) > 1e-12 * expected) {
      fail(ErrorCode::InvariantViolation, "curvature radius does not match arc length and angle");
    }
  }
}

double strain_to_rel_resistance(const GaugeModel& g, double strain) {
  if (!(strain >= 0.0 && strain <= g.max_strain)) {
    fail(ErrorCode::StrainOutOfRange,
         fmt::format("strain {} outside [0, {}]", strain, g.max_strain));
  }
  if (strain <= g.knee_strain) return g.gf_low * strain;
  return g.gf_low * g.knee_strain + g.gf_high * (strain - g.knee_strain);
}

double rel_resistance_to_strain(const GaugeModel& g, double rel_resistance) {
  const double top = g.max_rel_resistance();
  if (!(rel_resistance >= 0.0 && rel_resistance <= top * (1.0 + 1e-12))) {
    fail(ErrorCode::OutOfRange,
         fmt::format("relative resistance {} outside [0, {}]", rel_resistance, top));
  }
  const double knee_y = g.gf_low * g.knee_strain;
  if (rel_resistance <= knee_y) return rel_resistance / g.gf_low;
  return std::min(g.max_strain, g.knee_strain + (rel_resistance - knee_y) / g.gf_high);
}

double bending_strain(double thickness, double bending_radius) {
  if (!(bending_radius > 0.0)) {
    fail(ErrorCode::NonPositiveRadius, "bending radius must be > 0");
  }
  if (!(thickness > 0.0)) fail(ErrorCode::NonPositive, "thickness must be > 0");
  if (std::isinf(bending_radius)) return 0.0;
  return thickness / (2.0 * bending_radius);
}

double curvature_radius(double arc_length, double angle_deg) {
  if (!(arc_length > 0.0) || !(angle_deg > 0.0)) {
    fail(ErrorCode::NonPositive, "arc length and curvature angle must be > 0");
  }
  return 360.0 * arc_length / (2.0 * std::numbers::pi * angle_deg);
}

double wrap_angle(double arc_length, double radius) {
  if (!(arc_length > 0.0) || !(radius > 0.0)) {
    fail(ErrorCode::NonPositive, "arc length and radius must be > 0");
  }
  return 360.0 * arc_length / (2.0 * std::numbers::pi * radius);
}

StemGeometry geometry_for_diameter(const StemGeometry& base, double diameter) {
  if (!(diameter > 0.0)) fail(ErrorCode::NonPositive, "diameter must be > 0");
  StemGeometry g = base;
  g.curvature_radius = diameter / 2.0;
  g.bending_radius = diameter / 2.0;
  g.curvature_angle = wrap_angle(base.arc_length, g.curvature_radius);
  return g;
}

CalibrationTable default_bend_curve(const GaugeModel& g, double strain_lo, double strain_hi,
                                    std::size_t knots) {
  g.validate();
  if (!(strain_lo > 0.0 && strain_hi > strain_lo) || knots < 2) {
    fail(ErrorCode::InvalidArgument, "bend curve needs 0 < strain_lo < strain_hi and >= 2 knots");
  }
  std::vector<CalibrationPoint> pts;
  pts.reserve(knots);
  for (std::size_t i = 0; i < knots; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(knots - 1);
    const double eps = i + 1 == knots ? strain_hi : strain_lo + w * (strain_hi - strain_lo);
    pts.push_back({eps, strain_to_rel_resistance(g, eps)});
  }
  return CalibrationTable(std::move(pts), Extrapolation::Error, Unit::Strain, Unit::RelResistance);
}

double diameter_from_reading(const StemGeometry& geo, const CalibrationTable& bend_curve,
                             double rel_resistance) {
  if (!bend_curve.increasing()) {
    fail(ErrorCode::InvariantViolation, "bend curve must increase with strain");
  }
  const double eps = bend_curve.invert(rel_resistance);
  if (!(eps > 0.0)) {
    fail(ErrorCode::OutOfRange,
         fmt::format("reading {} maps to non-positive bending strain {}", rel_resistance, eps));
  }
  const double r_b = geo.sensor_thickness / (2.0 * eps);
  return 2.0 * r_b;
}

double diameter_from_reading(const GaugeModel& g, const StemGeometry& geo, double rel_resistance) {
  return diameter_from_reading(geo, default_bend_curve(g), rel_resistance);
}

double reading_from_diameter(const StemGeometry& geo, const CalibrationTable& bend_curve,
                             double diameter) {
  const double eps = bending_strain(geo.sensor_thickness, diameter / 2.0);
  return bend_curve.eval(eps);
}

// --- disturbance handling -------------------------------------------------

std::string_view to_string(EventType type) {
  return type == EventType::Disturbance ? "DISTURBANCE" : "SHIFT";
}

namespace {

struct RobustLine {
  double level = 0.0;
  double t_mid = 0.0;
  double slope = 0.0;
  double threshold = 0.0;

  double predict(double t) const { return level + slope * (t - t_mid); }
};

RobustLine fit_robust_line(const std::deque<Sample>& history, const BaselineConfig& cfg) {
  RobustLine fit;
  std::vector<double> ts;
  std::vector<double> vs;
  ts.reserve(history.size());
  vs.reserve(history.size());
  for (const auto& s : history) {
    ts.push_back(s.t);
    vs.push_back(s.value);
  }
  fit.level = median(vs);
  fit.t_mid = median(ts);
  const std::size_t lag = std::max<std::size_t>(1, history.size() / 2);
  std::vector<double> slopes;
  for (std::size_t j = 0; j + lag < history.size(); ++j) {
    slopes.push_back((vs[j + lag] - vs[j]) / (ts[j + lag] - ts[j]));
  }
  fit.slope = slopes.empty() ? 0.0 : median(std::move(slopes));
  std::vector<double> residuals;
  residuals.reserve(history.size());
  for (std::size_t j = 0; j < history.size(); ++j) residuals.push_back(vs[j] - fit.predict(ts[j]));
  const double robust_sigma = 1.4826 * median_abs_deviation(residuals);
  fit.threshold = std::max(cfg.k_mad * robust_sigma, cfg.noise_floor);
  return fit;
}

}  // namespace

BaselineResult baseline_correct(const TimeSeries& series, const BaselineConfig& cfg) {
  if (cfg.window < 2) fail(ErrorCode::InvalidArgument, "baseline window must be >= 2 samples");
  if (series.size() < cfg.window) {
    fail(ErrorCode::InsufficientData,
         fmt::format("baseline correction needs >= {} samples, got {}", cfg.window, series.size()));
  }
  const auto in = series.samples();
  std::vector<Sample> out(in.begin(), in.end());
  BaselineResult result;

  std::deque<Sample> history;
  auto accept = [&](const Sample& s) {
    history.push_back(s);
    if (history.size() > cfg.window) history.pop_front();
  };

  std::vector<std::size_t> pending;
  RobustLine frozen;
  double onset = 0.0;

  for (std::size_t i = 0; i < in.size(); ++i) {
    const Sample& s = in[i];
    if (pending.empty()) {
      if (history.size() < cfg.window) {
        accept(s);
        continue;
      }
      const RobustLine fit = fit_robust_line(history, cfg);
      if (std::abs(s.value - fit.predict(s.t)) > fit.threshold) {
        frozen = fit;
        onset = s.t;
        pending.push_back(i);
      } else {
        accept(s);
      }
      continue;
    }

    if (std::abs(s.value - frozen.predict(s.t)) <= frozen.threshold) {
      for (std::size_t j : pending) {
        out[j].value = frozen.predict(in[j].t);
        accept(out[j]);
      }
      result.disturbances.push_back({onset, s.t - onset, EventType::Disturbance});
      pending.clear();
      accept(s);
      continue;
    }

    pending.push_back(i);
    if (s.t - onset > cfg.max_pulse_duration) {
      result.shifts.push_back({onset, s.t - onset, EventType::Shift});
      history.clear();
      for (std::size_t j : pending) accept(in[j]);
      pending.clear();
    }
  }

  result.corrected = TimeSeries(series.channel(), series.unit(), std::move(out));
  return result;
}

std::string baseline_events_to_csv(const BaselineResult& result) {
  std::vector<BaselineEvent> all = result.disturbances;
  all.insert(all.end(), result.shifts.begin(), result.shifts.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const BaselineEvent& a, const BaselineEvent& b) { return a.onset < b.onset; });
  std::string out = "onset,duration,type\n";
  for (const auto& ev : all) {
    out += fmt::format("{},{},{}\n", format_number(ev.onset), format_number(ev.duration),
                       to_string(ev.type));
  }
  return out;
}

TimeSeries simulate_disturbance(bool kirigami, const DisturbanceEvent& ev,
                                const DisturbanceResponse& response) {
  if (!(ev.duration > 0.0) || !std::isfinite(ev.magnitude) || !(ev.onset >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "disturbance needs duration > 0, onset >= 0, finite magnitude");
  }
  if (!(response.sample_period > 0.0) || !(response.flat_time_constant > 0.0) ||
      !(response.kirigami_rise_multiplier > 0.0) || !(response.kirigami_attenuation >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "invalid disturbance response parameters");
  }
  const double tau = response.flat_time_constant *
                     (kirigami ? response.kirigami_rise_multiplier : 1.0);
  const double amplitude = ev.magnitude * (kirigami ? response.kirigami_attenuation : 1.0);
  const double off = ev.onset + ev.duration;
  const double end = off + response.tail_time_constants * tau;
  const auto n = static_cast<std::size_t>(std::floor(end / response.sample_period)) + 1;

  auto rise = [&](double t) { return amplitude * (1.0 - std::exp(-(t - ev.onset) / tau)); };
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * response.sample_period;
    double y = 0.0;
    if (t >= ev.onset) {
      if (ev.shape == DisturbanceShape::Step || t < off) {
        y = rise(t);
      } else {
        y = rise(off) * std::exp(-(t - off) / tau);
      }
    }
    samples.push_back({t, y});
  }
  return TimeSeries(kirigami ? "kirigami_rel_resistance" : "flat_rel_resistance",
                    Unit::RelResistance, std::move(samples));
}

}  // namespace planta::kirigami
