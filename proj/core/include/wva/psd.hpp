#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "wva/timeseries.hpp"

namespace wva {

enum class PsdMethod { kPeriodogram, kAveragedSegment };
enum class WindowFunction { kRectangular, kHann };

std::string_view to_string(PsdMethod m) noexcept;
std::string_view to_string(WindowFunction w) noexcept;
PsdMethod parse_psd_method(std::string_view name);
WindowFunction parse_window(std::string_view name);

struct PsdOptions {
  PsdMethod method = PsdMethod::kAveragedSegment;
  WindowFunction window = WindowFunction::kHann;
  /// Segment length for the averaged method; 0 picks the length that gives
  /// `segments` half-overlapping segments.
  std::size_t segment_length = 0;
  std::size_t segments = 8;
};

struct PsdPoint {
  double f = 0.0;  // Hz
  double S = 0.0;  // units^2 / Hz
};

struct PsdCurve {
  std::vector<PsdPoint> points;
  PsdMethod method = PsdMethod::kAveragedSegment;
  std::size_t segment_length = 0;
  WindowFunction window = WindowFunction::kHann;
};

/// One-sided PSD over (0, fs/2]. Each segment has its mean removed and is
/// normalised by the window power, so sum(S) * df matches the variance.
/// InsufficientData when the series is shorter than two segments.
PsdCurve psd(const TimeSeries& series, const PsdOptions& options = {});

}  // namespace wva
