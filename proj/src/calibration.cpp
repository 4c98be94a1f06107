#include "planta/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "planta/csv.hpp"
#include "planta/error.hpp"

namespace planta {

std::string_view to_string(Extrapolation policy) {
  switch (policy) {
    case Extrapolation::Clamp: return "clamp";
    case Extrapolation::LinearExtend: return "linear-extend";
    case Extrapolation::Error: return "error";
  }
  return "error";
}

Extrapolation parse_extrapolation(std::string_view text) {
  if (text == "clamp") return Extrapolation::Clamp;
  if (text == "linear-extend") return Extrapolation::LinearExtend;
  if (text == "error") return Extrapolation::Error;
  fail(ErrorCode::ParseError, "unknown extrapolation policy '" + std::string(text) + "'");
}

CalibrationTable::CalibrationTable(std::vector<CalibrationPoint> points, Extrapolation policy,
                                   Unit stimulus_unit, Unit response_unit)
    : points_(std::move(points)),
      policy_(policy),
      stimulus_unit_(stimulus_unit),
      response_unit_(response_unit) {
  if (points_.size() < 2) {
    fail(ErrorCode::NonMonotone, "calibration table needs at least 2 points");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.stimulus) || !std::isfinite(p.response)) {
      fail(ErrorCode::NonMonotone, "calibration table has a non-finite knot");
    }
  }
  increasing_ = points_[1].response > points_[0].response;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].stimulus > points_[i - 1].stimulus)) {
      fail(ErrorCode::NonMonotone,
           fmt::format("calibration stimuli not strictly increasing at knot {}", i));
    }
    const double d = points_[i].response - points_[i - 1].response;
    if (increasing_ ? !(d > 0.0) : !(d < 0.0)) {
      fail(ErrorCode::NonMonotone,
           fmt::format("calibration responses not strictly monotone at knot {}", i));
    }
  }
}

CalibrationTable CalibrationTable::linear(double stimulus_lo, double stimulus_hi,
                                          double response_lo, double response_hi,
                                          std::size_t knots, Extrapolation policy,
                                          Unit stimulus_unit, Unit response_unit) {
  if (knots < 2) fail(ErrorCode::InvalidArgument, "linear table needs at least 2 knots");
  std::vector<CalibrationPoint> pts;
  pts.reserve(knots);
  const double n = static_cast<double>(knots - 1);
  for (std::size_t i = 0; i < knots; ++i) {
    const double w = static_cast<double>(i) / n;
    pts.push_back({stimulus_lo + w * (stimulus_hi - stimulus_lo),
                   response_lo + w * (response_hi - response_lo)});
  }
  // Pin the ends so they are exact regardless of rounding in the weights.
  pts.front() = {stimulus_lo, response_lo};
  pts.back() = {stimulus_hi, response_hi};
  return CalibrationTable(std::move(pts), policy, stimulus_unit, response_unit);
}

double CalibrationTable::min_response() const {
  return increasing_ ? points_.front().response : points_.back().response;
}

double CalibrationTable::max_response() const {
  return increasing_ ? points_.back().response : points_.front().response;
}

CalibrationTable CalibrationTable::with_policy(Extrapolation policy) const {
  CalibrationTable copy = *this;
  copy.policy_ = policy;
  return copy;
}

namespace {

double lerp_segment(const CalibrationPoint& a, const CalibrationPoint& b, double x) {
  return a.response + (x - a.stimulus) * (b.response - a.response) / (b.stimulus - a.stimulus);
}

double lerp_inverse(const CalibrationPoint& a, const CalibrationPoint& b, double y) {
  return a.stimulus + (y - a.response) * (b.stimulus - a.stimulus) / (b.response - a.response);
}

}  // namespace

double CalibrationTable::eval(double stimulus) const {
  if (!std::isfinite(stimulus)) fail(ErrorCode::OutOfDomain, "non-finite stimulus");
  const auto& lo = points_.front();
  const auto& hi = points_.back();
  if (stimulus < lo.stimulus || stimulus > hi.stimulus) {
    switch (policy_) {
      case Extrapolation::Error:
        fail(ErrorCode::OutOfDomain,
             fmt::format("stimulus {} outside calibrated domain [{}, {}]", stimulus,
                         lo.stimulus, hi.stimulus));
      case Extrapolation::Clamp:
        return stimulus < lo.stimulus ? lo.response : hi.response;
      case Extrapolation::LinearExtend:
        return stimulus < lo.stimulus ? lerp_segment(points_[0], points_[1], stimulus)
                                      : lerp_segment(points_[points_.size() - 2], hi, stimulus);
    }
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), stimulus,
                             [](double x, const CalibrationPoint& p) { return x < p.stimulus; });
  if (it == points_.end()) return hi.response;  // stimulus == max
  const auto& left = *(it - 1);
  if (stimulus == left.stimulus) return left.response;
  return lerp_segment(left, *it, stimulus);
}

double CalibrationTable::invert(double response) const {
  if (!std::isfinite(response)) fail(ErrorCode::OutOfRange, "non-finite response");
  const double rmin = min_response();
  const double rmax = max_response();
  if (response < rmin || response > rmax) {
    switch (policy_) {
      case Extrapolation::Error:
        fail(ErrorCode::OutOfRange, fmt::format("response {} outside calibrated range [{}, {}]",
                                                response, rmin, rmax));
      case Extrapolation::Clamp: {
        const bool below = response < rmin;
        // below the smallest response: the stimulus end that produces it
        return (below == increasing_) ? points_.front().stimulus : points_.back().stimulus;
      }
      case Extrapolation::LinearExtend: {
        const bool at_front = (response < rmin) == increasing_;
        return at_front ? lerp_inverse(points_[0], points_[1], response)
                        : lerp_inverse(points_[points_.size() - 2], points_.back(), response);
      }
    }
  }
  // Binary search on the response column in its own direction.
  std::size_t lo = 0;
  std::size_t hi = points_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const bool right = increasing_ ? response >= points_[mid].response
                                   : response <= points_[mid].response;
    (right ? lo : hi) = mid;
  }
  if (response == points_[lo].response) return points_[lo].stimulus;
  if (response == points_[hi].response) return points_[hi].stimulus;
  return lerp_inverse(points_[lo], points_[hi], response);
}

CalibrationTable parse_calibration_csv(std::string_view text, Extrapolation policy,
                                       std::string source) {
  const auto table = parse_csv(text, std::move(source));
  const auto cs = table.column("stimulus");
  const auto cr = table.column("response");
  const auto cus = table.column("unit_stimulus");
  const auto cur = table.column("unit_response");
  if (table.rows.empty()) fail(ErrorCode::ParseError, table.source + ": no calibration rows");
  const Unit us = parse_unit(table.rows[0][cus]);
  const Unit ur = parse_unit(table.rows[0][cur]);
  std::vector<CalibrationPoint> pts;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (parse_unit(table.rows[r][cus]) != us || parse_unit(table.rows[r][cur]) != ur) {
      fail(ErrorCode::ParseError,
           fmt::format("{}: line {}: unit tags differ from the first row", table.source,
                       table.line_numbers[r]));
    }
    pts.push_back({to_base(parse_field(table, r, cs), us), to_base(parse_field(table, r, cr), ur)});
  }
  return CalibrationTable(std::move(pts), policy, base_unit(us), base_unit(ur));
}

CalibrationTable read_calibration_csv(const std::filesystem::path& path, Extrapolation policy) {
  return parse_calibration_csv(read_text_file(path), policy, path.string());
}

std::string calibration_to_csv(const CalibrationTable& table) {
  std::string out = "stimulus,response,unit_stimulus,unit_response\n";
  for (const auto& p : table.points()) {
    out += fmt::format("{},{},{},{}\n", format_number(p.stimulus), format_number(p.response),
                       unit_tag(table.stimulus_unit()), unit_tag(table.response_unit()));
  }
  return out;
}

}  // namespace planta
