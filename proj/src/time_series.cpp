#include "planta/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "planta/error.hpp"

namespace planta {

TimeSeries::TimeSeries(std::string channel, Unit unit, std::vector<Sample> samples)
    : channel_(std::move(channel)), unit_(unit), samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.value)) {
      fail(ErrorCode::InvariantViolation,
           "series '" + channel_ + "': non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(s.t > samples_[i - 1].t)) {
      fail(ErrorCode::InvariantViolation,
           "series '" + channel_ + "': timestamps not strictly increasing at index " +
               std::to_string(i));
    }
  }
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.t);
  return out;
}

std::vector<double> TimeSeries::values() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.value);
  return out;
}

TimeSeries TimeSeries::since(double t0) const {
  auto it = std::lower_bound(samples_.begin(), samples_.end(), t0,
                             [](const Sample& s, double t) { return s.t < t; });
  return TimeSeries(channel_, unit_, std::vector<Sample>(it, samples_.end()));
}

TimeSeries TimeSeries::between(double t0, double t1) const {
  std::vector<Sample> out;
  for (const auto& s : samples_) {
    if (s.t >= t0 && s.t <= t1) out.push_back(s);
  }
  return TimeSeries(channel_, unit_, std::move(out));
}

TimeSeries TimeSeries::shifted(double dt, double dv) const {
  auto out = samples_;
  for (auto& s : out) {
    s.t += dt;
    s.value += dv;
  }
  return TimeSeries(channel_, unit_, std::move(out));
}

TimeSeries TimeSeries::converted(Unit to) const {
  auto out = samples_;
  for (auto& s : out) s.value = convert(s.value, unit_, to);
  return TimeSeries(channel_, to, std::move(out));
}

TimeSeries TimeSeries::renamed(std::string channel) const {
  TimeSeries copy = *this;
  copy.channel_ = std::move(channel);
  return copy;
}

double TimeSeries::interpolate(double t) const {
  if (samples_.empty()) fail(ErrorCode::InsufficientData, "interpolate on empty series");
  if (t <= samples_.front().t) return samples_.front().value;
  if (t >= samples_.back().t) return samples_.back().value;
  auto hi = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const Sample& s) { return v < s.t; });
  auto lo = hi - 1;
  if (t == lo->t) return lo->value;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->value + w * (hi->value - lo->value);
}

TimeSeries resample(const TimeSeries& series, std::span<const double> grid) {
  std::vector<Sample> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back({t, series.interpolate(t)});
  return TimeSeries(series.channel(), series.unit(), std::move(out));
}

}  // namespace planta
