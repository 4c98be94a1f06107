#pragma once

#include <span>
#include <string>
#include <vector>

#include "planta/units.hpp"

namespace planta {

struct Sample {
  double t = 0.0;  // seconds since scenario start (or epoch)
  double value = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ordered samples of one channel. Timestamps are strictly increasing and
/// every value is finite; the constructor enforces both.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::string channel, Unit unit, std::vector<Sample> samples = {});

  const std::string& channel() const { return channel_; }
  Unit unit() const { return unit_; }
  std::span<const Sample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }

  std::vector<double> times() const;
  std::vector<double> values() const;

  /// Samples with t >= t0.
  TimeSeries since(double t0) const;
  /// Samples with t0 <= t <= t1.
  TimeSeries between(double t0, double t1) const;

  TimeSeries shifted(double dt, double dv = 0.0) const;
  TimeSeries converted(Unit to) const;
  TimeSeries renamed(std::string channel) const;

  /// Linear interpolation; holds the end values outside the sampled span.
  double interpolate(double t) const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::string channel_;
  Unit unit_ = Unit::Dimensionless;
  std::vector<Sample> samples_;
};

/// Resamples onto the given timestamps by linear interpolation.
TimeSeries resample(const TimeSeries& series, std::span<const double> grid);

}  // namespace planta
