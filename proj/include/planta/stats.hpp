#pragma once

#include <span>
#include <vector>

#include "planta/time_series.hpp"

namespace planta {

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator).
double sample_stddev(std::span<const double> values);

double median(std::vector<double> values);

/// Median absolute deviation about the median (unscaled).
double median_abs_deviation(std::span<const double> values);

/// Ordinary least-squares slope of y on x. Both inputs are centred first,
/// so the result does not depend on offsets added to x or y.
double ols_slope(std::span<const double> x, std::span<const double> y);

/// OLS slope over the trailing `window_seconds` of the series (samples with
/// t >= t_last - window), in series units per day. Throws InsufficientData
/// with fewer than two samples in the window.
double linear_trend(const TimeSeries& series, double window_seconds);

/// Sample standard deviation over |mean|. Throws InsufficientData for fewer
/// than two values and ZeroMean when the mean is exactly zero.
double coefficient_of_variation(std::span<const double> values);

}  // namespace planta
