#pragma once

#include <span>
#include <string>
#include <vector>

namespace wva {

struct CalibrationPoint {
  double tau_as = 0.0;
  double mean_shift = 0.0;  // pixels
};

/// Shift-versus-delay line, shift = slope * tau + intercept.
struct CalibrationLine {
  double slope = 0.0;      // pixels per attosecond
  double intercept = 0.0;  // pixels
  double residual_rms = 0.0;
  std::vector<CalibrationPoint> points;
};

/// Ordinary least squares. UnderdeterminedFit with fewer than two distinct
/// delays.
CalibrationLine calibrate(std::span<const CalibrationPoint> points);

/// (shift - intercept) / slope. DegenerateCalibration for a zero or
/// non-finite slope.
double estimate_tau(double shift, const CalibrationLine& line);

std::string to_json(const CalibrationLine& line, const std::string& config_hash = {}, unsigned long long seed = 0,
                    bool synthetic = true);
CalibrationLine calibration_from_json(const std::string& text);

}  // namespace wva
