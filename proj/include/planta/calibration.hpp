#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "planta/units.hpp"

namespace planta {

enum class Extrapolation { Clamp, LinearExtend, Error };

std::string_view to_string(Extrapolation policy);
Extrapolation parse_extrapolation(std::string_view text);

struct CalibrationPoint {
  double stimulus = 0.0;
  double response = 0.0;

  friend bool operator==(const CalibrationPoint&, const CalibrationPoint&) = default;
};

/// Monotone piecewise-linear map from a physical stimulus to an electrical
/// response, and back.
///
/// Stimuli must be strictly increasing and responses strictly monotone (the
/// direction is recorded), with at least two knots; violations are rejected
/// at construction with NonMonotone. Evaluation is exact at the knots. Values
/// are stored in base units; the unit tags only document what the table maps.
class CalibrationTable {
 public:
  CalibrationTable(std::vector<CalibrationPoint> points, Extrapolation policy,
                   Unit stimulus_unit = Unit::Dimensionless,
                   Unit response_unit = Unit::Dimensionless);

  /// Straight line sampled at `knots` evenly spaced stimuli.
  static CalibrationTable linear(double stimulus_lo, double stimulus_hi, double response_lo,
                                 double response_hi, std::size_t knots, Extrapolation policy,
                                 Unit stimulus_unit = Unit::Dimensionless,
                                 Unit response_unit = Unit::Dimensionless);

  /// Stimulus -> response. Outside [min, max] stimulus the policy applies;
  /// policy Error throws OutOfDomain.
  double eval(double stimulus) const;

  /// Response -> stimulus. Outside the response range the policy applies;
  /// policy Error throws OutOfRange.
  double invert(double response) const;

  const std::vector<CalibrationPoint>& points() const { return points_; }
  Extrapolation policy() const { return policy_; }
  bool increasing() const { return increasing_; }
  Unit stimulus_unit() const { return stimulus_unit_; }
  Unit response_unit() const { return response_unit_; }

  double min_stimulus() const { return points_.front().stimulus; }
  double max_stimulus() const { return points_.back().stimulus; }
  double min_response() const;
  double max_response() const;

  CalibrationTable with_policy(Extrapolation policy) const;

  friend bool operator==(const CalibrationTable&, const CalibrationTable&) = default;

 private:
  std::vector<CalibrationPoint> points_;
  Extrapolation policy_;
  Unit stimulus_unit_;
  Unit response_unit_;
  bool increasing_ = true;
};

/// Calibration CSV: header `stimulus,response,unit_stimulus,unit_response`,
/// one knot per row, rows ascending by stimulus. Values are converted to base
/// units on read (a thickness table in `um` ends up in metres).
CalibrationTable read_calibration_csv(const std::filesystem::path& path, Extrapolation policy);
CalibrationTable parse_calibration_csv(std::string_view text, Extrapolation policy,
                                       std::string source = "<memory>");

/// Writes the table in its own unit tags.
std::string calibration_to_csv(const CalibrationTable& table);

}  // namespace planta
