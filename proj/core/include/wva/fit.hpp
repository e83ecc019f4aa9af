#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "wva/allan.hpp"
#include "wva/psd.hpp"

namespace wva {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // log10 units
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

/// Least squares of log10(y) on log10(x) over points with lo <= x <= hi and
/// y > 0. EmptyBand when fewer than `min_points` qualify.
SlopeFit loglog_fit(std::span<const double> x, std::span<const double> y, double lo, double hi,
                    std::size_t min_points = 4);

/// Band in seconds of averaging interval.
SlopeFit slope_fit(const AllanCurve& curve, double lo, double hi);
/// Band in Hz.
SlopeFit slope_fit(const PsdCurve& curve, double lo, double hi);

/// Exponent of sigma2 against n_r; needs at least three points.
SlopeFit scaling_fit(std::span<const std::pair<double, double>> points);

}  // namespace wva
