#include "planta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "planta/error.hpp"

namespace planta {

double mean(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::InsufficientData, "mean of empty set");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) fail(ErrorCode::InsufficientData, "stddev needs at least 2 values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
  if (values.empty()) fail(ErrorCode::InsufficientData, "median of empty set");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

double median_abs_deviation(std::span<const double> values) {
  const double m = median(std::vector<double>(values.begin(), values.end()));
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - m));
  return median(std::move(dev));
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "ols_slope: size mismatch");
  if (x.size() < 2) fail(ErrorCode::InsufficientData, "ols_slope needs at least 2 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    sxy += dx * (y[i] - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) fail(ErrorCode::InsufficientData, "ols_slope: x has zero spread");
  return sxy / sxx;
}

double linear_trend(const TimeSeries& series, double window_seconds) {
  if (series.size() < 2) {
    fail(ErrorCode::InsufficientData,
         "linear_trend on '" + series.channel() + "': fewer than 2 samples");
  }
  const auto window = series.since(series.back().t - window_seconds);
  if (window.size() < 2) {
    fail(ErrorCode::InsufficientData,
         "linear_trend on '" + series.channel() + "': fewer than 2 samples in window");
  }
  // Time relative to the window start keeps the day conversion well scaled.
  const double t0 = window.front().t;
  std::vector<double> days;
  days.reserve(window.size());
  for (const auto& s : window.samples()) days.push_back((s.t - t0) / kSecondsPerDay);
  const auto values = window.values();
  return ols_slope(days, values);
}

double coefficient_of_variation(std::span<const double> values) {
  if (values.size() < 2) {
    fail(ErrorCode::InsufficientData, "coefficient of variation needs at least 2 values");
  }
  const double m = mean(values);
  if (m == 0.0) fail(ErrorCode::ZeroMean, "coefficient of variation: mean is zero");
  return sample_stddev(values) / std::abs(m);
}

}  // namespace planta
