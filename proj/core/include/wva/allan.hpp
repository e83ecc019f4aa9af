#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wva/timeseries.hpp"

namespace wva {

enum class AllanMode {
  kOverlapping,     // windows n samples apart, all start positions
  kAdjacentSample,  // windows one sample apart (literal compatibility reading)
};

struct AllanPoint {
  double T = 0.0;  // s, n * dt
  double sigma2 = 0.0;
  std::size_t n = 0;
  std::size_t windows_used = 0;
};

struct AllanCurve {
  std::vector<AllanPoint> points;
};

struct AllanResult {
  double sigma2 = 0.0;
  std::size_t windows_used = 0;
};

/// sum_{k=1}^{M-2n+1} (ybar_{k+n} - ybar_k)^2 / (2 (M-2n+1)) where ybar_k is
/// the mean of samples k..k+n-1. InsufficientData when M < 2n.
AllanResult allan_variance(const TimeSeries& series, std::size_t n, AllanMode mode = AllanMode::kOverlapping);

/// Roughly log-spaced window lengths from 1 to M/2, `per_decade` per decade,
/// duplicates removed.
std::vector<std::size_t> log_n_grid(std::size_t length, int per_decade = 10);

AllanCurve allan_curve(const TimeSeries& series, std::span<const std::size_t> n_grid,
                       AllanMode mode = AllanMode::kOverlapping);
AllanCurve allan_curve(const TimeSeries& series, AllanMode mode = AllanMode::kOverlapping);

}  // namespace wva
